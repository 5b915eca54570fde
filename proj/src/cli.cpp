#include "toricdist/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "toricdist/checks.hpp"
#include "toricdist/distribution.hpp"
#include "toricdist/error.hpp"
#include "toricdist/projective.hpp"

namespace toricdist {

namespace {

using nlohmann::json;

// TORICDIST_LOG: 0/error, 1/warn (default), 2/info, 3/debug.
int log_level() {
  static const int level = [] {
    const char* env = std::getenv("TORICDIST_LOG");
    if (!env) return 1;
    const std::string s(env);
    if (s == "error" || s == "0") return 0;
    if (s == "info" || s == "2") return 2;
    if (s == "debug" || s == "3") return 3;
    return 1;
  }();
  return level;
}

void log(int level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= log_level()) std::cerr << "[toricdist " << names[level] << "] " << msg << '\n';
}

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Mat& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

struct Model {
  Polytope polytope;
  WeightSet weights;
  OrbitModel orbit;
};

Model load_model(const RunConfig& cfg) {
  if (cfg.polytope_path.empty()) throw ParseError("--polytope is required for --cmd " + cfg.command);
  auto p = load_polytope(cfg.polytope_path);
  auto w = parse_weights(cfg.weights, p);
  log(2, "loaded " + cfg.polytope_path + ": " + std::to_string(p.lattice_points().size()) + " lattice points");
  OrbitModel o(p, w);
  return {p, w, o};
}

NormOptions norm_options(const RunConfig& cfg) {
  NormOptions opts;
  opts.route = cfg.route;
  opts.rel_tol = cfg.tol;
  opts.workers = cfg.workers;
  return opts;
}

const IntVec& require_alpha(const RunConfig& cfg, const Polytope& p) {
  if (!cfg.alpha) throw ParseError("--alpha is required for --cmd " + cfg.command);
  if (static_cast<int>(cfg.alpha->size()) != p.dim()) throw ParseError("--alpha has the wrong dimension");
  if (!p.contains(*cfg.alpha)) throw PointOutsidePolytope(to_string(*cfg.alpha) + " is not in P");
  return *cfg.alpha;
}

IntVec scaled(const IntVec& a, long n) {
  IntVec g(a);
  for (auto& v : g) v *= n;
  return g;
}

std::string weights_note(const RunConfig& cfg) { return "weights=" + cfg.weights; }

}  // namespace

WeightSet parse_weights(const std::string& spec, const Polytope& p) {
  if (spec == "unit") return WeightSet::unit(p);
  if (spec.rfind("binomial:", 0) == 0) {
    std::int64_t q = 0;
    try {
      q = std::stoll(spec.substr(9));
    } catch (const std::exception&) {
      throw ParseError("bad binomial weight spec '" + spec + "'");
    }
    return binomial_weights(p, q);
  }
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw ParseError("cannot open weight file " + spec.substr(5));
    std::map<IntVec, double> m;
    try {
      const json j = json::parse(in);
      for (const auto& e : j.at("weights")) m[e.at("point").get<IntVec>()] = e.at("value").get<double>();
    } catch (const json::exception& ex) {
      throw ParseError(std::string("bad weight file: ") + ex.what());
    }
    for (const auto& [pt, v] : m)
      if (!(v > 0)) throw ParseError("weight at " + to_string(pt) + " must be positive");
    return WeightSet::from_map(p, m);
  }
  throw ParseError("unknown weight spec '" + spec + "' (expected unit, binomial:p or file:FILE)");
}

std::vector<double> parse_tgrid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  const char sep = spec.find(':') != std::string::npos ? ':' : ',';
  while (std::getline(ss, item, sep)) parts.push_back(item);
  try {
    if (sep == ':') {
      if (parts.size() != 4) throw ParseError("t-grid spec must be KIND:LO:HI:COUNT");
      const double lo = std::stod(parts[1]);
      const double hi = std::stod(parts[2]);
      const int n = std::stoi(parts[3]);
      if (parts[0] == "geom") return geometric_grid(lo, hi, n);
      if (parts[0] == "lin") {
        if (n < 1 || !(hi >= lo)) throw ParseError("linear t-grid needs lo <= hi and count >= 1");
        std::vector<double> out;
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? hi : lo + (hi - lo) * i / (n - 1));
        return out;
      }
      throw ParseError("t-grid kind must be geom or lin");
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(std::stod(p));
    return out;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad t-grid spec '" + spec + "'");
  }
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const auto p = load_polytope(cfg.polytope_path);
  json j{{"polytope", cfg.polytope_path},
         {"dim", p.dim()},
         {"vertices", p.vertices().size()},
         {"facets", p.facets().size()},
         {"lattice_points", p.lattice_points().size()},
         {"volume", p.volume()}};
  int code = kExitOk;
  try {
    validate_delzant(p);
    j["delzant"] = true;
  } catch (const NotDelzant& ex) {
    j["delzant"] = false;
    j["vertex"] = ex.vertex();
    j["det"] = ex.det();
    j["message"] = ex.what();
    code = kExitInvalid;
  }
  out << j.dump(2) << '\n';
  return code;
}

int cmd_peak(const RunConfig& cfg, std::ostream& out) {
  const auto md = load_model(cfg);
  const auto& p = md.polytope;
  json j;
  if (cfg.x) {
    const auto pk = peak_data(md.orbit, *cfg.x);
    j = {{"kind", "interior"}, {"x", to_json(pk.x)}, {"rho_x", to_json(pk.rho_x)}, {"A", to_json(pk.A)},
         {"detA", pk.detA},    {"c", pk.cPx},        {"d", p.dim()}};
  } else {
    const auto& alpha = require_alpha(cfg, p);
    const long n = cfg.N.front();
    const auto face = face_of(p, alpha, n);
    const Vec x = to_real(alpha) / static_cast<double>(n);
    if (face.is_interior()) {
      const auto pk = peak_data(md.orbit, x);
      j = {{"kind", "interior"}, {"x", to_json(pk.x)}, {"rho_x", to_json(pk.rho_x)}, {"A", to_json(pk.A)},
           {"detA", pk.detA},    {"c", pk.cPx},        {"d", p.dim()}};
    } else {
      const IntVec v0 = default_chart_vertex(p, face);
      const ChartModel c(build_vertex_chart(p, face, v0), md.weights);
      const auto g = c.chart().transform(alpha, n);
      j = {{"x", to_json(x)}, {"r", face.codim}, {"d", p.dim() + face.codim}, {"v0", v0}};
      if (face.codim < p.dim()) {
        Vec at(p.dim() - face.codim);
        for (int i = face.codim; i < p.dim(); ++i) at[i - face.codim] = static_cast<double>(g[static_cast<std::size_t>(i)]) / n;
        const auto pk = chart_peak(c, at);
        j["kind"] = "face";
        j["alpha_tilde"] = to_json(pk.alpha_tilde);
        j["rho_F"] = to_json(pk.rho_F);
        j["A_F"] = to_json(pk.A_F);
        j["detA_F"] = pk.A_F.determinant();
        j["f_k"] = to_json(pk.f_k);
        j["k_F"] = pk.kF_at_peak;
        j["L0"] = pk.L0;
        j["c"] = pk.cPalpha;
      } else {
        const auto pk = vertex_peak(c, v0);
        j["kind"] = "vertex";
        j["K0"] = pk.K0;
        j["c"] = pk.cPalpha;
      }
    }
  }
  out << std::setprecision(17) << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_norms(const RunConfig& cfg, std::ostream& out) {
  const auto md = load_model(cfg);
  const auto& alpha = require_alpha(cfg, md.polytope);
  const auto opts = norm_options(cfg);
  out << "# ||phi_{N alpha}||_{2k}^{2k}: exact by quadrature, asymptotic = leading term, ratio = exact/asymptotic; alpha="
      << to_string(alpha) << ' ' << weights_note(cfg) << ", dimensionless (Vol(M_P) = vol(P))\n";
  out << "N,k,exact,asymptotic,ratio,route\n" << std::setprecision(17);
  for (long n : cfg.N) {
    for (int k : cfg.k) {
      log(2, "norms N=" + std::to_string(n) + " k=" + std::to_string(k));
      const auto rep = l2k_norm(md.orbit, scaled(alpha, n), n, k, opts);
      out << n << ',' << k << ',' << rep.exact << ',' << rep.asymptotic << ',' << rep.ratio << ',' << rep.route << '\n';
    }
  }
  return kExitOk;
}

int cmd_pointwise(const RunConfig& cfg, std::ostream& out) {
  const auto md = load_model(cfg);
  const auto& p = md.polytope;
  const auto& alpha = require_alpha(cfg, p);
  const int m = p.dim();
  const int per_axis = m <= 2 ? 41 : 11;
  auto grid_point = [&](int i, int dims, std::vector<double>& u) {
    u.assign(static_cast<std::size_t>(dims), 0);
    for (int j = 0; j < dims; ++j) {
      u[static_cast<std::size_t>(j)] = static_cast<double>(i % per_axis) / (per_axis - 1);
      i /= per_axis;
    }
  };
  const auto face = face_of(p, alpha, 1);
  const int r = face.codim;
  out << "# |phi_{N alpha}|^2 (exact) against the pointwise asymptotic (prediction); alpha=" << to_string(alpha) << ' '
      << weights_note(cfg);
  if (r == 0) {
    out << "; orbit coordinates rho = log|z|^2, chart_exact = same value through the vertex chart\n";
    out << "N";
    for (int j = 0; j < m; ++j) out << ",rho_" << j + 1;
    out << ",exact,prediction,ratio,chart_exact,chart_rel_diff\n";
  } else {
    out << "; chart coordinates t = |xi| (normal) and rho (along the face)\n";
    out << "N";
    for (int j = 0; j < r; ++j) out << ",t_" << j + 1;
    for (int j = r; j < m; ++j) out << ",rho_" << j - r + 1;
    out << ",exact,prediction,ratio\n";
  }
  out << std::setprecision(17);
  int total = 1;
  for (int j = 0; j < m; ++j) total *= per_axis;
  for (long n : cfg.N) {
    log(2, "pointwise N=" + std::to_string(n));
    const auto gamma = scaled(alpha, n);
    const Eigenfunction e(md.orbit, gamma, n, norm_options(cfg));
    const auto info = peak_info(e);
    std::vector<double> u;
    if (r == 0) {
      auto copts = norm_options(cfg);
      copts.route = Route::chart;
      const Eigenfunction ec(md.orbit, gamma, n, copts);
      const auto& pk = *info.interior;
      for (int i = 0; i < total; ++i) {
        grid_point(i, m, u);
        Vec rho = pk.rho_x;
        for (int j = 0; j < m; ++j) rho[j] += -2 + 4 * u[static_cast<std::size_t>(j)];
        const double lex = e.log_sq(rho);
        const double lpr = log_pointwise_asymptotic(md.orbit, pk, n, rho);
        const double lch = ec.log_sq(ec.chart().from_orbit(rho));
        out << n;
        for (int j = 0; j < m; ++j) out << ',' << rho[j];
        out << ',' << std::exp(lex) << ',' << std::exp(lpr) << ',' << std::exp(lex - lpr) << ',' << std::exp(lch) << ','
            << std::expm1(lch - lex) << '\n';
      }
    } else {
      const auto anchor = e.chart_anchor();
      const double nn = static_cast<double>(n);
      for (int i = 0; i < total; ++i) {
        grid_point(i, m, u);
        ChartPoint pt{Vec(r), anchor.rho};
        for (int j = 0; j < r; ++j) pt.t[j] = 4 / std::sqrt(nn) * u[static_cast<std::size_t>(j)];
        for (int j = r; j < m; ++j) pt.rho[j - r] += -2 + 4 * u[static_cast<std::size_t>(j)];
        const double lex = e.log_sq(pt);
        const double lpr = info.kind == PeakKind::vertex
                               ? log_pointwise_asymptotic_vertex(e.chart(), *info.vertex, n, pt)
                               : log_pointwise_asymptotic_boundary(e.chart(), *info.face, n, pt);
        out << n;
        for (int j = 0; j < r; ++j) out << ',' << pt.t[j];
        for (int j = r; j < m; ++j) out << ',' << pt.rho[j - r];
        out << ',' << std::exp(lex) << ',' << std::exp(lpr) << ',' << std::exp(lex - lpr) << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_dist(const RunConfig& cfg, std::ostream& out) {
  const auto md = load_model(cfg);
  const auto& alpha = require_alpha(cfg, md.polytope);
  const auto grid = parse_tgrid(cfg.tgrid);
  DistributionOptions dopts;
  dopts.rel_tol = std::max(cfg.tol, 1e-10);
  dopts.region_rel_tol = cfg.region_tol;
  std::vector<DistributionCurve> curves;
  for (long n : cfg.N) {
    const Eigenfunction e(md.orbit, scaled(alpha, n), n, norm_options(cfg));
    const double c = peak_info(e).c;
    for (auto s : {Scaling::none, Scaling::power, Scaling::exponential}) {
      log(2, "dist N=" + std::to_string(n) + " scaling " + to_string(s));
      std::vector<double> ts = grid;
      if (s == Scaling::power)
        for (auto& t : ts) t *= c;
      curves.push_back(distribution_curve(e, s, ts, dopts));
    }
  }
  out << "# alpha=" << to_string(alpha) << ' ' << weights_note(cfg)
      << "; t-grid " << cfg.tgrid << " (power scaling: in units of c)\n";
  write_csv(out, curves);
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  json j;
  bool all = true;
  auto to_j = [](const CheckResult& r) {
    return json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}};
  };
  if (!cfg.polytope_path.empty()) {
    const auto md = load_model(cfg);
    j["polytope"] = cfg.polytope_path;
    j["polytope_checks"] = json::array();
    for (const auto& r : polytope_checks(md.orbit)) {
      log(2, format_line(r));
      all = all && r.passed;
      j["polytope_checks"].push_back(to_j(r));
    }
  }
  std::vector<int> ids = cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= kAcceptanceCount; ++i) ids.push_back(i);
  j["acceptance"] = json::array();
  for (int id : ids) {
    const auto r = run_acceptance_check(id);
    log(2, format_line(r));
    all = all && r.passed;
    j["acceptance"].push_back(to_j(r));
  }
  j["all_passed"] = all;
  out << j.dump(2) << '\n';
  return all ? kExitOk : kExitInvalid;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Toric eigenfunction norms, localization and distribution functions"};
  RunConfig cfg;
  std::vector<std::int64_t> alpha;
  std::vector<double> x;
  std::string route = "auto";
  app.add_option("--polytope", cfg.polytope_path, "Polytope JSON file");
  app.add_option("--weights", cfg.weights, "unit | binomial:p | file:FILE")->capture_default_str();
  app.add_option("--cmd", cfg.command, "Command")
      ->check(CLI::IsMember({"validate", "peak", "norms", "pointwise", "dist", "report"}))
      ->capture_default_str();
  app.add_option("--N", cfg.N, "Levels N (comma separated)")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--alpha", alpha, "Lattice point of P (comma separated)")->delimiter(',');
  app.add_option("--x", x, "Interior point of P (comma separated)")->delimiter(',');
  app.add_option("--k", cfg.k, "Exponents k of the L^{2k} norms")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--tgrid", cfg.tgrid, "KIND:LO:HI:COUNT (geom|lin) or a comma list")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Relative tolerance of norms and level sets")->check(CLI::PositiveNumber);
  app.add_option("--region-tol", cfg.region_tol, "Relative tolerance of cell-grid level sets")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--workers", cfg.workers, "Threads per quadrature")->check(CLI::PositiveNumber);
  app.add_option("--route", route, "auto | orbit | chart")->check(CLI::IsMember({"auto", "orbit", "chart"}));
  app.add_option("--criteria", cfg.criteria, "Acceptance criteria for --cmd report")
      ->delimiter(',')
      ->check(CLI::Range(1, kAcceptanceCount));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (!alpha.empty()) cfg.alpha = IntVec(alpha.begin(), alpha.end());
  if (!x.empty()) cfg.x = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
  cfg.route = route == "orbit" ? Route::orbit : (route == "chart" ? Route::chart : Route::automatic);

  try {
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ParseError("cannot write " + cfg.out);
    }
    std::ostream& out = cfg.out.empty() ? std::cout : file;
    if (cfg.command != "report" && cfg.polytope_path.empty()) throw ParseError("--polytope is required");
    if (cfg.command == "validate") return cmd_validate(cfg, out);
    if (cfg.command == "peak") return cmd_peak(cfg, out);
    if (cfg.command == "norms") return cmd_norms(cfg, out);
    if (cfg.command == "pointwise") return cmd_pointwise(cfg, out);
    if (cfg.command == "dist") return cmd_dist(cfg, out);
    return cmd_report(cfg, out);
  } catch (const NoConvergence& ex) {
    log(0, ex.what());
    return kExitNoConvergence;
  } catch (const RegionTouchesBoundary& ex) {
    log(0, ex.what());
    return kExitNoConvergence;
  } catch (const MarginTooSmall& ex) {
    log(0, ex.what());
    return kExitNoConvergence;
  } catch (const std::exception& ex) {
    log(0, ex.what());
    return kExitInvalid;
  }
}

}  // namespace toricdist
