#include "toricdist/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "toricdist/distribution.hpp"
#include "toricdist/error.hpp"
#include "toricdist/norms.hpp"
#include "toricdist/projective.hpp"

namespace toricdist {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Polytope seven_sigma() { return standard_simplex(2, 7); }

// Criterion 1: N values swept for every p and m. The quadrature is asked for
// the acceptance tolerance; the closed form decides.
const std::vector<long> kOracleN{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
constexpr double kOracleTol = 1e-8;

CheckResult gamma_oracle() {
  CheckResult r{1, "gamma-oracle equivalence (p Sigma, binomial weights)", true, "", 0};
  double worst = 0;
  std::string where;
  int count = 0;
  for (int m = 1; m <= 2; ++m) {
    for (std::int64_t p = 1; p <= 3; ++p) {
      const OrbitModel o(standard_simplex(m, p), binomial_weights(p, m));
      for (long n : kOracleN) {
        const auto np = standard_simplex(m, p * n);
        for (const auto& g : np.lattice_points()) {
          const double exact = log_norm_sq_closed_form(p, n, g);
          NormOptions opts;
          opts.rel_tol = kOracleTol;
          const Eigenfunction e(o, g, n, opts);
          const double err = std::abs(std::expm1(e.log_norm_sq() - exact));
          ++count;
          if (err > worst) {
            worst = err;
            where = "m=" + std::to_string(m) + " p=" + std::to_string(p) + " N=" + std::to_string(n) + " gamma=" +
                    to_string(g);
          }
        }
      }
    }
  }
  r.passed = worst <= kOracleTol;
  r.detail = std::to_string(count) + " norms, worst rel. err " + num(worst) + " at " + where;
  return r;
}

CheckResult l2k_cp1() {
  CheckResult r{2, "L^4 norm of CP^1 (N=1, p=1, alpha=1) equals 4/3", true, "", 0};
  const double lg = lq_norm_exact(1, 1, IntVec{1}, 4);
  const auto P = standard_simplex(1, 1);
  const double quad = l2k_norm(OrbitModel(P, WeightSet::unit(P)), IntVec{1}, 1, 2).exact;
  const double e1 = std::abs(lg - 4.0 / 3);
  const double e2 = std::abs(quad - 4.0 / 3);
  r.passed = e1 <= 1e-10 && e2 <= 1e-7;
  r.detail = "log-Gamma err " + num(e1) + ", quadrature err " + num(e2);
  return r;
}

CheckResult det_a_closed_form() {
  CheckResult r{3, "det A closed form on p Sigma", true, "", 0};
  double worst = 0;
  int count = 0;
  double seven = 0;
  for (int m = 1; m <= 2; ++m) {
    for (std::int64_t p = 1; p <= 7; ++p) {
      const auto P = standard_simplex(m, p);
      const OrbitModel o(P, binomial_weights(p, m));
      for (const auto& a : P.lattice_points()) {
        const Vec x = to_real(a);
        if (!P.strictly_contains(x)) continue;
        const double num_det = peak_data(o, x).detA;
        const double closed = detA_closed_form(static_cast<double>(p), x);
        worst = std::max(worst, std::abs(num_det - closed));
        if (m == 2 && p == 7 && a == IntVec{2, 3}) seven = num_det;
        ++count;
      }
    }
  }
  r.passed = worst <= 1e-10 && std::abs(seven - 12.0 / 7) <= 1e-10;
  r.detail = std::to_string(count) + " interior points, worst abs err " + num(worst) + "; 7Sigma (2,3): " +
             std::to_string(seven);
  return r;
}

// max |exact / prediction - 1| over a grid of 41 points per axis, |rho - rho_x|_inf <= 2.
double pointwise_deviation(const OrbitModel& o, const Vec& x, long n) {
  const int m = o.dim();
  IntVec g(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) g[static_cast<std::size_t>(j)] = std::llround(x[j] * static_cast<double>(n));
  const Eigenfunction e(o, g, n);
  const auto pk = peak_data(o, x);
  double worst = 0;
  int total = 1;
  for (int j = 0; j < m; ++j) total *= 41;
  for (int i = 0; i < total; ++i) {
    Vec rho = pk.rho_x;
    int rem = i;
    for (int j = 0; j < m; ++j) {
      rho[j] += -2 + 0.1 * (rem % 41);
      rem /= 41;
    }
    const double ratio = std::exp(e.log_sq(rho) - log_pointwise_asymptotic(o, pk, n, rho));
    worst = std::max(worst, std::abs(ratio - 1));
  }
  return worst;
}

CheckResult pointwise_law() {
  CheckResult r{4, "pointwise law: O(1/N) trend, within 0.05 at N=128", true, "", 0};
  const auto S = standard_simplex(1, 1);
  const auto P7 = seven_sigma();
  const std::vector<std::pair<std::string, std::pair<OrbitModel, Vec>>> cases{
      {"Sigma x=1/2", {OrbitModel(S, WeightSet::unit(S)), Vec::Constant(1, 0.5)}},
      {"7Sigma (2,3)", {OrbitModel(P7, binomial_weights(7, 2)), (Vec(2) << 2, 3).finished()}}};
  for (const auto& [name, c] : cases) {
    const double d32 = pointwise_deviation(c.first, c.second, 32);
    const double d64 = pointwise_deviation(c.first, c.second, 64);
    const double d128 = pointwise_deviation(c.first, c.second, 128);
    const bool ok = d64 <= 0.7 * d32 && d128 <= 0.05;
    r.passed = r.passed && ok;
    r.detail += name + ": " + num(d32) + ", " + num(d64) + ", " + num(d128) + "; ";
  }
  return r;
}

CheckResult vertex_law() {
  CheckResult r{5, "vertex peak N+1 against prediction N on CP^1, N <= 1000", true, "", 0};
  const auto S = standard_simplex(1, 1);
  const OrbitModel o(S, WeightSet::unit(S));
  double worst = 0;
  for (long n = 1; n <= 1000; ++n) {
    const Eigenfunction e(o, IntVec{0}, n);
    const ChartPoint origin{Vec::Zero(1), Vec(0)};
    const double exact = eigenfunction_sq(e, origin);
    const double pred = pointwise_asymptotic_vertex(e.chart(), vertex_peak(e.chart(), IntVec{0}), n, origin);
    const double nn = static_cast<double>(n);
    worst = std::max({worst, std::abs(exact / (nn + 1) - 1), std::abs(exact / pred / ((nn + 1) / nn) - 1)});
  }
  r.passed = worst <= 1e-9;
  r.detail = "worst rel. deviation from N+1 and (N+1)/N: " + num(worst);
  return r;
}

CheckResult rescaled_limit_cp1() {
  CheckResult r{6, "rescaled distribution limit on CP^1, x=1/2", true, "", 0};
  const auto S = standard_simplex(1, 1);
  const OrbitModel o(S, WeightSet::unit(S));
  const double c = 2;
  const auto ts = geometric_grid(0.05 * c, 0.99 * c, 20);
  double dev[2] = {0, 0};
  double at = 0;
  for (int i = 0; i < 2; ++i) {
    const long n = i == 0 ? 100 : 200;
    const Eigenfunction e(o, IntVec{n / 2}, n);
    for (double t : ts) dev[i] = std::max(dev[i], std::abs(rescaled_distribution(e, t) - rescaled_limit(c, 1, t)));
    if (n == 200) at = rescaled_distribution(e, 2 / std::numbers::e);
  }
  const double err = std::abs(at - 1 / std::sqrt(std::numbers::pi));
  r.passed = err <= 0.05 && dev[1] < dev[0];
  r.detail = "F(2/e) at N=200 = " + num(at) + " (err " + num(err) + "); grid deviation N=100 " + num(dev[0]) +
             ", N=200 " + num(dev[1]);
  return r;
}

CheckResult exponential_limit_cp1() {
  CheckResult r{7, "exponential-scaling limit on CP^1, x=1/2, t=log(2/sqrt 3)", true, "", 0};
  const auto S = standard_simplex(1, 1);
  const OrbitModel o(S, WeightSet::unit(S));
  const double t = std::log(2 / std::sqrt(3.0));
  DistributionOptions tight;
  tight.rel_tol = 1e-10;
  const double lim = exp_rescaled_limit(o, Vec::Constant(1, 0.5), t, tight);
  const double fin = exp_rescaled_distribution(Eigenfunction(o, IntVec{50}, 100), t);
  r.passed = std::abs(lim - 0.5) <= 1e-6 && std::abs(fin - 0.5) <= 0.05;
  r.detail = "limit integral " + std::to_string(lim) + ", D(e^{-Nt}) at N=100 = " + num(fin);
  return r;
}

CheckResult moments() {
  CheckResult r{8, "moment identities of the limit density and O(1/N) empirical trend", true, "", 0};
  double worst = 0;
  for (int h = 1; h <= 4; ++h) {
    for (int k = 0; k <= 5; ++k) {
      const double c = 0.75;
      const double q = limit_density_moment(c, h, k);
      worst = std::max(worst, std::abs(q / limit_density_moment_closed_form(c, h, k) - 1));
    }
  }
  const auto S = standard_simplex(1, 1);
  const OrbitModel o(S, WeightSet::unit(S));
  bool trend = true;
  std::string dev;
  for (int k = 1; k <= 3; ++k) {
    double d[3];
    for (int i = 0; i < 3; ++i) {
      const long n = 32L << i;
      d[i] = std::abs(moment_check(o, IntVec{n / 2}, n, k).ratio - 1);
    }
    if (k == 1) {
      trend = trend && d[0] <= 1e-12 && d[1] <= 1e-12 && d[2] <= 1e-12;
    } else {
      trend = trend && d[1] <= 0.6 * d[0] && d[2] <= 0.6 * d[1];
    }
    dev += " k=" + std::to_string(k) + ": " + num(d[0]) + ", " + num(d[1]) + ", " + num(d[2]) + ";";
  }
  r.passed = worst <= 1e-8 && trend;
  r.detail = "limit moments worst rel. err " + num(worst) + "; |ratio-1| at N=32,64,128:" + dev;
  return r;
}

CheckResult pushforward() {
  CheckResult r{9, "pushforward volume equals vol(P)", true, "", 0};
  const std::vector<std::pair<std::string, Polytope>> ps{
      {"Sigma", standard_simplex(1, 1)}, {"square", cube(2, 1)}, {"7Sigma", seven_sigma()}};
  for (const auto& [name, P] : ps) {
    const double v = pushforward_volume(OrbitModel(P, WeightSet::unit(P))).value;
    const double err = std::abs(v / P.volume() - 1);
    r.passed = r.passed && err <= 1e-4;
    r.detail += name + " " + num(v) + " (rel. err " + num(err) + "); ";
  }
  return r;
}

Polytope hirzebruch() {
  return Polytope(2, {{{1, 0}, 0}, {{0, 1}, 0}, {{0, -1}, -1}, {{-1, -1}, -2}}, {{0, 0}, {2, 0}, {1, 1}, {0, 1}});
}

CheckResult derivatives() {
  CheckResult r{10, "Hessian/gradient consistency and positivity", true, "", 0};
  const auto H = hirzebruch();
  std::vector<double> hw;
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (std::size_t i = 0; i < H.lattice_points().size(); ++i) hw.push_back(u(gen));
  const std::vector<std::pair<std::string, OrbitModel>> ms{
      {"Sigma", OrbitModel(standard_simplex(1, 1), WeightSet::unit(standard_simplex(1, 1)))},
      {"square", OrbitModel(cube(2, 1), WeightSet::unit(cube(2, 1)))},
      {"7Sigma", OrbitModel(seven_sigma(), binomial_weights(7, 2))},
      {"F1", OrbitModel(H, WeightSet(hw))}};
  unsigned seed = 1;
  for (const auto& [name, o] : ms) {
    const auto dc = derivative_check(o, 100, seed);
    const int fails = positivity_failures(o, 1000, seed + 100);
    ++seed;
    r.passed = r.passed && dc.gradient_error <= 1e-6 && dc.hessian_error <= 1e-6 && fails == 0;
    r.detail += name + " grad " + num(dc.gradient_error) + " hess " + num(dc.hessian_error) + " non-PD " +
                std::to_string(fails) + "; ";
  }
  return r;
}

CheckResult unrescaled_decay() {
  CheckResult r{11, "unrescaled decay D(1) against (log N/N)^{1/2} on CP^1", true, "", 0};
  const auto S = standard_simplex(1, 1);
  const OrbitModel o(S, WeightSet::unit(S));
  std::vector<double> ratios;
  for (long n : {100L, 1000L, 10000L}) {
    const Eigenfunction e(o, IntVec{n / 2}, n);
    ratios.push_back(distribution_exact(e, 1.0) / unrescaled_asymptotic(2, 1, static_cast<double>(n)));
  }
  const bool monotone = std::abs(ratios[1] - 1) < std::abs(ratios[0] - 1) && std::abs(ratios[2] - 1) < std::abs(ratios[1] - 1);
  r.passed = monotone && std::abs(ratios[2] - 1) <= 0.25;
  r.detail = "ratios at N=100,1000,10000: " + num(ratios[0]) + ", " + num(ratios[1]) + ", " + num(ratios[2]);
  return r;
}

CheckResult chart_orbit() {
  CheckResult r{12, "chart/orbit agreement for interior gamma on 7Sigma", true, "", 0};
  const OrbitModel o(seven_sigma(), binomial_weights(7, 2));
  double worst = 0;
  int count = 0;
  for (long n : {1L, 2L}) {
    const auto np = standard_simplex(2, 7 * n);
    for (const auto& g : np.lattice_points()) {
      if (!face_of(o.polytope(), g, n).is_interior()) continue;
      NormOptions a;
      a.route = Route::orbit;
      NormOptions b;
      b.route = Route::chart;
      const double lo = Eigenfunction(o, g, n, a).log_norm_sq();
      const double lc = Eigenfunction(o, g, n, b).log_norm_sq();
      worst = std::max(worst, std::abs(std::expm1(lc - lo)));
      ++count;
    }
  }
  r.passed = worst <= 1e-7;
  r.detail = std::to_string(count) + " interior gamma (N=1,2), worst rel. diff " + num(worst);
  return r;
}

}  // namespace

CheckResult run_acceptance_check(int id) {
  static const std::vector<std::function<CheckResult()>> checks{
      gamma_oracle, l2k_cp1,     det_a_closed_form, pointwise_law, vertex_law,       rescaled_limit_cp1,
      exponential_limit_cp1, moments, pushforward,  derivatives,   unrescaled_decay, chart_orbit};
  if (id < 1 || id > kAcceptanceCount) throw DomainError("no acceptance criterion " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = checks[static_cast<std::size_t>(id - 1)]();
  } catch (const std::exception& ex) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.passed = false;
    r.detail = std::string("error: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
  return r;
}

std::vector<CheckResult> run_acceptance() {
  std::vector<CheckResult> out;
  for (int id = 1; id <= kAcceptanceCount; ++id) out.push_back(run_acceptance_check(id));
  return out;
}

std::string format_line(const CheckResult& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " (%.2f s)", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + "  " + (r.id < 10 ? " " : "") + std::to_string(r.id) + "  " +
         r.name + ": " + r.detail + buf;
}

DerivativeCheck derivative_check(const OrbitModel& o, int points, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 2.0);
  const int m = o.dim();
  const double h = 1e-5;
  DerivativeCheck dc;
  dc.points = points;
  for (int i = 0; i < points; ++i) {
    Vec rho(m);
    for (int j = 0; j < m; ++j) rho[j] = nd(gen);
    const Vec mu = moment_map(o, rho);
    const Mat A = hessian_A(o, rho);
    for (int j = 0; j < m; ++j) {
      Vec up = rho;
      Vec dn = rho;
      up[j] += h;
      dn[j] -= h;
      const double g = (character_k(o, up) - character_k(o, dn)) / (2 * h);
      dc.gradient_error = std::max(dc.gradient_error, std::abs(g - mu[j]));
      const Vec col = (moment_map(o, up) - moment_map(o, dn)) / (2 * h);
      dc.hessian_error = std::max(dc.hessian_error, (col - A.col(j)).cwiseAbs().maxCoeff());
    }
  }
  return dc;
}

int positivity_failures(const OrbitModel& o, int draws, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 3.0);
  const auto& p = o.polytope();
  const int m = o.dim();
  std::vector<ChartModel> facets;
  if (m >= 2) {
    for (std::size_t i = 0; i < p.facets().size(); ++i) {
      Face f{{i}, m - 1, 1};
      for (const auto& v : p.vertices()) {
        const auto act = p.active_facets(v);
        if (std::find(act.begin(), act.end(), i) != act.end()) {
          facets.emplace_back(build_vertex_chart(p, f, v), o.weights());
          break;
        }
      }
    }
  }
  int fails = 0;
  for (int i = 0; i < draws; ++i) {
    Vec rho(m);
    for (int j = 0; j < m; ++j) rho[j] = nd(gen);
    if (Eigen::LLT<Mat>(hessian_A(o, rho)).info() != Eigen::Success) ++fails;
    for (const auto& c : facets) {
      const Vec r = rho.head(m - 1);
      if (Eigen::LLT<Mat>(c.face_character().derivatives(r).cov).info() != Eigen::Success) ++fails;
    }
  }
  return fails;
}

std::vector<CheckResult> polytope_checks(const OrbitModel& o) {
  std::vector<CheckResult> out;
  auto timed = [&](CheckResult r, const std::function<void(CheckResult&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(r);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(r);
  };
  timed({1, "Delzant", true, "", 0}, [&](CheckResult& r) {
    validate_delzant(o.polytope());
    r.detail = std::to_string(o.polytope().vertices().size()) + " smooth vertices";
  });
  timed({2, "pushforward volume", true, "", 0}, [&](CheckResult& r) {
    const double v = pushforward_volume(o).value;
    const double err = std::abs(v / o.polytope().volume() - 1);
    r.passed = err <= 1e-4;
    r.detail = num(v) + " vs vol(P) " + num(o.polytope().volume());
  });
  timed({3, "derivative consistency", true, "", 0}, [&](CheckResult& r) {
    const auto dc = derivative_check(o, 100, 1);
    r.passed = dc.gradient_error <= 1e-6 && dc.hessian_error <= 1e-6;
    r.detail = "grad " + num(dc.gradient_error) + " hess " + num(dc.hessian_error);
  });
  timed({4, "positivity of A and A_F", true, "", 0}, [&](CheckResult& r) {
    const int fails = positivity_failures(o, 1000, 2);
    r.passed = fails == 0;
    r.detail = std::to_string(fails) + " failures in 1000 draws";
  });
  return out;
}

}  // namespace toricdist
