#include "toricdist/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/tools/roots.hpp>

#include "toricdist/error.hpp"

namespace toricdist {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
// Search limit for every coordinate; find_box stops at the level set.
constexpr double kSearchLimit = 1e4;

// Distance along ray from the center to the level set {f = thr}.
double ray_radius(const RealFunction& f, double thr, const Vec& center, const Vec& dir, double guess) {
  auto g = [&](double s) { return f(center + s * dir) - thr; };
  double lo = 0;
  double g_lo = g(0);
  double hi = guess;
  double g_hi = g(hi);
  while (g_hi > 0) {
    lo = hi;
    g_lo = g_hi;
    hi *= 2;
    if (hi > 1e8) throw DomainError("superlevel set is unbounded along a ray");
    g_hi = g(hi);
  }
  if (g_hi == 0) return hi;
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi,
                                                      boost::math::tools::eps_tolerance<double>(50), iters);
  return (root.first + root.second) / 2;
}

// Volume of {f > thr} for concave f with maximum at `center`, in polar
// coordinates rho = center + s L omega where L whitens `hessian` (-Hess f).
IntegralResult star_volume(const RealFunction& f, double thr, const Vec& center, const Mat& hessian,
                           const RealFunction& weight, const DistributionOptions& opts) {
  IntegralResult res;
  const double peak = f(center);
  if (!(thr < peak)) {
    res.converged = true;
    res.log_value = -std::numeric_limits<double>::infinity();
    return res;
  }
  const int m = static_cast<int>(center.size());
  const Eigen::LLT<Mat> llt(hessian);
  if (llt.info() != Eigen::Success) throw DomainError("Hessian at the peak is not positive definite");
  const Mat L = Mat(llt.matrixL()).transpose().inverse();
  const double det_L = std::abs(L.determinant());
  const double guess = std::max(std::sqrt(2 * (peak - thr)), 1e-3);
  long long evals = 0;
  auto counted = [&](const Vec& y) {
    ++evals;
    return f(y);
  };
  auto ray = [&](const Vec& omega, int q) {
    const Vec dir = L * omega;
    const double R = ray_radius(counted, thr, center, dir, guess);
    const auto gl = gauss_legendre(q);
    KahanSum sum;
    for (int i = 0; i < q; ++i) {
      const double s = R * (gl.nodes[static_cast<std::size_t>(i)] + 1) / 2;
      sum.add(gl.weights[static_cast<std::size_t>(i)] * weight(center + s * dir) * std::pow(s, m - 1));
      ++evals;
    }
    return sum.value() * R / 2;
  };
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int level = 0; level <= opts.refinement_limit; ++level) {
    const int q = 16 + 8 * level;
    const int n = 8 << level;
    KahanSum total;
    if (m == 1) {
      total.add(ray(Vec::Constant(1, 1.0), q));
      total.add(ray(Vec::Constant(1, -1.0), q));
    } else if (m == 2) {
      for (int i = 0; i < n; ++i) {
        const double th = kTwoPi * i / n;
        Vec omega(2);
        omega << std::cos(th), std::sin(th);
        total.add(ray(omega, q) * kTwoPi / n);
      }
    } else {
      const auto gz = gauss_legendre(n / 2);
      for (int j = 0; j < n / 2; ++j) {
        const double z = gz.nodes[static_cast<std::size_t>(j)];
        const double rxy = std::sqrt(1 - z * z);
        for (int i = 0; i < n; ++i) {
          const double th = kTwoPi * i / n;
          Vec omega(3);
          omega << rxy * std::cos(th), rxy * std::sin(th), z;
          total.add(ray(omega, q) * gz.weights[static_cast<std::size_t>(j)] * kTwoPi / n);
        }
      }
    }
    res.value = det_L * total.value();
    res.levels = level + 1;
    res.est_error = level > 0 ? std::abs(res.value - prev) / res.value : 1.0;
    if (res.est_error <= opts.rel_tol) {
      res.converged = true;
      break;
    }
    prev = res.value;
  }
  res.n_evals = evals;
  res.log_value = std::log(res.value);
  if (!res.converged) throw NoConvergence("polar level set volume did not converge");
  return res;
}

// Volume of {f > thr} weighted by `weight`; anchor must be the maximum of f.
IntegralResult superlevel_volume(const RealFunction& f, double thr, const Vec& anchor, const Vec& steps,
                                 const Box& limits, const RealFunction& weight, const DistributionOptions& opts) {
  IntegralResult res;
  const double peak = f(anchor);
  if (!(thr < peak)) {
    res.converged = true;
    res.log_value = -std::numeric_limits<double>::infinity();
    return res;
  }
  auto tb = find_box(f, anchor, limits, peak - thr + 1, steps);
  const Vec pad = 0.1 * (tb.box.hi - tb.box.lo);
  QuadratureSpec spec;
  spec.box.lo = tb.box.lo;
  spec.box.hi = tb.box.hi;
  for (Eigen::Index i = 0; i < anchor.size(); ++i) {
    if (!tb.lower_is_edge[static_cast<std::size_t>(i)]) spec.box.lo[i] = std::max(limits.lo[i], tb.box.lo[i] - pad[i]);
    if (!tb.upper_is_edge[static_cast<std::size_t>(i)]) spec.box.hi[i] = std::min(limits.hi[i], tb.box.hi[i] + pad[i]);
    spec.lower_is_edge.push_back(spec.box.lo[i] == limits.lo[i]);
    spec.upper_is_edge.push_back(spec.box.hi[i] == limits.hi[i]);
  }
  spec.base_points_per_dim = opts.base_cells;
  spec.refinement_limit = opts.refinement_limit;
  spec.rel_tol = opts.region_rel_tol;
  spec.rule = Rule::trapezoid;
  spec.tail_bound = std::isfinite(tb.boundary_log_max) ? std::exp(tb.boundary_log_max - thr) : 0.0;
  res = region_volume([&](const Vec& y) { return f(y) > thr; }, weight, spec);
  if (!res.converged) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "level set volume did not converge (boundary mass %.3g relative, tolerance %.3g)",
                  res.est_error, opts.region_rel_tol);
    throw NoConvergence(msg);
  }
  return res;
}

double chart_weight(const ChartModel& c, const ChartPoint& pt) {
  double w = c.L_density(pt);
  for (Eigen::Index j = 0; j < pt.t.size(); ++j) w *= 2 * pt.t[j];
  return w;
}

ChartPoint split(const Vec& y, int r) { return {y.head(r), y.tail(y.size() - r)}; }

// Box limits and initial steps for chart coordinates (t, rho) around a face peak.
void chart_search(const ChartModel& c, const ChartPoint& anchor, double n, Box& limits, Vec& steps) {
  const int r = c.split_r();
  const int m = c.dim();
  limits = {Vec(m), Vec(m)};
  steps = Vec(m);
  const Vec lf = c.log_f(anchor.rho);
  const double log_kF = m > r ? c.face_character().log_value(anchor.rho) : c.log_K(anchor);
  for (int j = 0; j < r; ++j) {
    limits.lo[j] = 0;
    limits.hi[j] = kSearchLimit;
    steps[j] = anchor.t[j] > 0 ? anchor.t[j] / 4 : 0.5 * std::sqrt(std::exp(log_kF - lf[j]) / n);
  }
  if (m > r) {
    const Mat AF = c.face_character().derivatives(anchor.rho).cov;
    for (int j = r; j < m; ++j) {
      limits.lo[j] = anchor.rho[j - r] - kSearchLimit;
      limits.hi[j] = anchor.rho[j - r] + kSearchLimit;
      steps[j] = 0.5 / std::sqrt(n * AF(j - r, j - r));
    }
  }
}

Vec join(const ChartPoint& pt) {
  Vec y(pt.t.size() + pt.rho.size());
  y << pt.t, pt.rho;
  return y;
}

}  // namespace

IntegralResult level_set_volume(const Eigenfunction& e, double log_threshold, const DistributionOptions& opts) {
  const double n = static_cast<double>(e.N());
  if (e.route() == Route::orbit) {
    const auto& o = e.orbit();
    const Vec anchor = e.orbit_anchor();
    const Mat A = hessian_A(o, anchor);
    const int m = o.dim();
    if (m <= 3) {
      return star_volume([&](const Vec& rho) { return e.log_sq(rho); }, log_threshold, anchor, n * A,
                         [&](const Vec& rho) { return volume_density(o, rho); }, opts);
    }
    Vec steps(m);
    for (int i = 0; i < m; ++i) steps[i] = 0.5 / std::sqrt(n * A(i, i));
    const Box limits{(anchor.array() - kSearchLimit).matrix(), (anchor.array() + kSearchLimit).matrix()};
    return superlevel_volume([&](const Vec& rho) { return e.log_sq(rho); }, log_threshold, anchor, steps, limits,
                             [&](const Vec& rho) { return volume_density(o, rho); }, opts);
  }
  const auto& c = e.chart();
  const int r = c.split_r();
  const ChartPoint anchor = e.chart_anchor();
  Box limits;
  Vec steps;
  chart_search(c, anchor, n, limits, steps);
  return superlevel_volume([&](const Vec& y) { return e.log_sq(split(y, r)); }, log_threshold, join(anchor), steps,
                           limits, [&](const Vec& y) { return chart_weight(c, split(y, r)); }, opts);
}

double distribution_exact(const Eigenfunction& e, double t, const DistributionOptions& opts) {
  if (!(t > 0)) throw DomainError("distribution function needs t > 0");
  return level_set_volume(e, std::log(t), opts).value;
}

double rescaled_distribution(const Eigenfunction& e, double t, const DistributionOptions& opts) {
  if (!(t > 0)) throw DomainError("distribution function needs t > 0");
  const int d = e.orbit().dim() + e.face().codim;
  const double s = std::pow(static_cast<double>(e.N()) / kTwoPi, d / 2.0);
  return s * level_set_volume(e, std::log(s) + std::log(t), opts).value;
}

double rescaled_limit(double c, int d, double t) {
  if (!(t > 0)) throw DomainError("rescaled limit needs t > 0");
  if (t >= c) return 0;
  return std::pow(std::log(c / t), d / 2.0) / (c * std::tgamma(d / 2.0 + 1));
}

double limit_density(double c, int h, double x) {
  if (!(x > 0) || !(x < c)) return 0;
  return std::pow(std::log(c / x), h / 2.0 - 1) / (c * std::tgamma(h / 2.0));
}

double limit_density_moment(double c, int h, int k) {
  if (h < 1 || k < 0) throw DomainError("limit density needs h >= 1 and k >= 0");
  const double kk = k;
  const double base = std::log(2.0) + kk * std::log(c) - std::lgamma(h / 2.0);
  QuadratureSpec spec;
  spec.box = {Vec::Zero(1), Vec::Constant(1, std::sqrt(80.0 / (kk + 1)))};
  spec.rel_tol = 1e-13;
  spec.refinement_limit = 10;
  const auto res = laplace_integral(
      [&](const Vec& v) { return base + (h - 1) * std::log(v[0]) - (kk + 1) * v[0] * v[0]; }, spec);
  return res.value;
}

double limit_density_moment_closed_form(double c, int h, int k) { return std::pow(c, k) / std::pow(k + 1.0, h / 2.0); }

MomentCheck moment_check(const OrbitModel& o, const IntVec& gamma, long n, int k, const NormOptions& opts) {
  const auto rep = l2k_norm(o, gamma, n, k, opts);
  const Eigenfunction e(o, gamma, n, opts);
  const auto info = peak_info(e);
  const double d = info.m + info.r;
  MomentCheck mc;
  mc.empirical = std::pow(static_cast<double>(n) / kTwoPi, -d * (k - 1) / 2) * rep.exact;
  mc.limit = std::pow(info.c, k - 1) / std::pow(static_cast<double>(k), d / 2);
  mc.ratio = mc.empirical / mc.limit;
  return mc;
}

double exp_rescaled_limit(const OrbitModel& o, const Vec& x, double t, const DistributionOptions& opts) {
  if (!(t > 0)) return 0;
  const auto pk = peak_data(o, x);
  const int m = o.dim();
  if (m <= 3) {
    return star_volume([&](const Vec& rho) { return -b_function(o, pk, rho); }, -t, pk.rho_x, pk.A,
                       [&](const Vec& rho) { return volume_density(o, rho); }, opts)
        .value;
  }
  Vec steps(m);
  for (int i = 0; i < m; ++i) steps[i] = 0.5 / std::sqrt(pk.A(i, i));
  const Box limits{(pk.rho_x.array() - kSearchLimit).matrix(), (pk.rho_x.array() + kSearchLimit).matrix()};
  return superlevel_volume([&](const Vec& rho) { return -b_function(o, pk, rho); }, -t, pk.rho_x, steps, limits,
                           [&](const Vec& rho) { return volume_density(o, rho); }, opts)
      .value;
}

double exp_rescaled_limit_chart(const ChartModel& c, const Vec& alpha_tilde, double t, const DistributionOptions& opts) {
  if (!(t > 0)) return 0;
  const int r = c.split_r();
  const int m = c.dim();
  ChartPoint anchor{Vec::Zero(r), Vec(m - r)};
  if (m > r) anchor.rho = invert_face_moment(c, alpha_tilde);
  const double s0 = c.s_value(anchor, alpha_tilde);
  Box limits;
  Vec steps;
  chart_search(c, anchor, 1.0, limits, steps);
  return superlevel_volume([&](const Vec& y) { return s0 - c.s_value(split(y, r), alpha_tilde); }, -t, join(anchor),
                           steps, limits, [&](const Vec& y) { return chart_weight(c, split(y, r)); }, opts)
      .value;
}

double exp_rescaled_limit(const Eigenfunction& e, double t, const DistributionOptions& opts) {
  const double n = static_cast<double>(e.N());
  if (e.face().is_interior()) return exp_rescaled_limit(e.orbit(), to_real(e.gamma()) / n, t, opts);
  const auto& c = e.chart();
  const int r = c.split_r();
  Vec at(c.dim() - r);
  for (int j = r; j < c.dim(); ++j) at[j - r] = static_cast<double>(e.chart_gamma()[static_cast<std::size_t>(j)]) / n;
  return exp_rescaled_limit_chart(c, at, t, opts);
}

double exp_rescaled_distribution(const Eigenfunction& e, double t, const DistributionOptions& opts) {
  return level_set_volume(e, -static_cast<double>(e.N()) * t, opts).value;
}

double unrescaled_asymptotic(double c, int d, double n) {
  const double dd = d;
  return std::pow(std::numbers::pi * dd, dd / 2) / (c * std::tgamma(dd / 2 + 1)) * std::pow(std::log(n) / n, dd / 2);
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi >= lo) || n < 1) throw DomainError("geometric grid needs 0 < lo <= hi and n >= 1");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

std::string to_string(Scaling s) {
  switch (s) {
    case Scaling::power:
      return "power";
    case Scaling::exponential:
      return "exponential";
    default:
      return "none";
  }
}

DistributionCurve distribution_curve(const Eigenfunction& e, Scaling s, const std::vector<double>& ts,
                                     const DistributionOptions& opts) {
  const auto info = peak_info(e);
  DistributionCurve curve;
  curve.scaling = s;
  curve.N = e.N();
  curve.gamma = e.gamma();
  curve.d = info.m + info.r;
  curve.c = info.c;
  const double n = static_cast<double>(e.N());
  for (double t : ts) {
    DistributionSample smp;
    smp.t = t;
    switch (s) {
      case Scaling::none:
        smp.value = distribution_exact(e, t, opts);
        smp.limit_value = unrescaled_asymptotic(curve.c, curve.d, n);
        break;
      case Scaling::power:
        smp.value = rescaled_distribution(e, t, opts);
        smp.limit_value = rescaled_limit(curve.c, curve.d, t);
        break;
      case Scaling::exponential:
        smp.value = exp_rescaled_distribution(e, t, opts);
        smp.limit_value = exp_rescaled_limit(e, t, opts);
        break;
    }
    curve.samples.push_back(smp);
  }
  return curve;
}

void write_csv(std::ostream& out, const std::vector<DistributionCurve>& curves) {
  for (const auto& c : curves) {
    out << "# gamma=" << to_string(c.gamma) << " N=" << c.N << " d=" << c.d << " c=" << std::setprecision(12) << c.c
        << " scaling=" << to_string(c.scaling) << ": ";
    switch (c.scaling) {
      case Scaling::none:
        out << "value = D(t) = Vol{|phi|^2 > t} (total volume vol(P)); limit_value = (pi d)^{d/2}/(c Gamma(d/2+1)) (log N/N)^{d/2}\n";
        break;
      case Scaling::power:
        out << "value = (N/2pi)^{d/2} D((N/2pi)^{d/2} t); limit_value = (log(c/t))^{d/2}/(c Gamma(d/2+1))\n";
        break;
      case Scaling::exponential:
        out << "value = D(e^{-N t}); limit_value = N -> infinity limit (volume of the sublevel set of the exponent)\n";
        break;
    }
  }
  out << "scaling,N,t,value,limit_value\n" << std::setprecision(17);
  for (const auto& c : curves)
    for (const auto& s : c.samples)
      out << to_string(c.scaling) << ',' << c.N << ',' << s.t << ',' << s.value << ',' << s.limit_value << '\n';
}

}  // namespace toricdist
