#include "toricdist/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "toricdist/error.hpp"

namespace toricdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2 * std::numbers::pi;
// Search limit for the whitened coordinates; find_box stops far earlier.
constexpr double kVLimit = 25;

IntegralResult run(const RealFunction& f, const TruncatedBox& tb, const NormOptions& opts) {
  QuadratureSpec spec;
  spec.box = tb.box;
  spec.base_points_per_dim = opts.base_points;
  spec.refinement_limit = opts.refinement_limit;
  spec.rel_tol = opts.rel_tol;
  spec.workers = opts.workers;
  spec.tail_bound = std::isfinite(tb.boundary_log_max) ? std::exp(tb.boundary_log_max - tb.peak_log) : 0.0;
  return laplace_integral(f, spec);
}

// rho = center + L v sinh(|v|)/|v| with L L^T = (N A)^{-1}: the Gaussian core
// is isotropic in v and linear tails e^{-c|rho|} become double-exponential
// in every direction.
struct RadialSinhMap {
  Vec center;
  Mat L;
  double log_det_L = 0;

  RadialSinhMap(Vec c, const Mat& scaled_hessian) : center(std::move(c)) {
    const Eigen::LLT<Mat> llt(scaled_hessian);
    if (llt.info() != Eigen::Success) throw DomainError("Hessian at the peak is not positive definite");
    const Mat C = llt.matrixL();
    L = C.transpose().inverse();
    log_det_L = std::log(std::abs(L.determinant()));
  }

  static double shape(double r) { return r < 1e-8 ? 1 + r * r / 6 : std::sinh(r) / r; }
  Vec point(const Vec& v) const { return center + L * v * shape(v.norm()); }
  double log_jacobian(const Vec& v) const {
    const double r = v.norm();
    return log_det_L + (v.size() - 1) * std::log(shape(r)) + std::log(std::cosh(r));
  }
  Box limits() const { return {Vec::Constant(center.size(), -kVLimit), Vec::Constant(center.size(), kVLimit)}; }
};

}  // namespace

std::string to_string(Route r) {
  switch (r) {
    case Route::orbit:
      return "orbit";
    case Route::chart:
      return "chart";
    default:
      return "auto";
  }
}

Eigenfunction::Eigenfunction(const OrbitModel& o, IntVec gamma, long n, const NormOptions& opts)
    : o_(o), gamma_(std::move(gamma)), n_(n), opts_(opts) {
  if (n < 1) throw DomainError("N must be positive");
  const auto& p = o_.polytope();
  if (static_cast<int>(gamma_.size()) != p.dim()) throw DomainError("gamma has the wrong dimension");
  face_ = face_of(p, gamma_, n_);
  route_ = opts.route;
  if (route_ == Route::automatic) route_ = face_.is_interior() ? Route::orbit : Route::chart;
  if (route_ == Route::orbit && !face_.is_interior()) {
    throw PointNotInterior("the orbit route needs gamma in the interior of N P; " + toricdist::to_string(gamma_) +
                           " lies on a face of codimension " + std::to_string(face_.codim));
  }
  Face chart_face = face_;
  IntVec v0;
  if (face_.is_interior()) {
    v0 = opts.v0 ? *opts.v0 : *std::min_element(p.vertices().begin(), p.vertices().end());
    chart_face = face_of(p, v0);
  } else {
    v0 = opts.v0 ? *opts.v0 : default_chart_vertex(p, face_);
  }
  chart_.emplace(build_vertex_chart(p, chart_face, v0), o_.weights());
  chart_gamma_ = chart_->chart().transform(gamma_, n_);
  norm_ = route_ == Route::orbit ? integrate_orbit({}) : integrate_chart({});
}

double Eigenfunction::log_chi_sq(const Vec& rho) const {
  return to_real(gamma_).dot(rho) - static_cast<double>(n_) * o_.character().log_value(rho);
}

double Eigenfunction::log_chi_sq(const ChartPoint& pt) const {
  const int r = chart_->split_r();
  double s = 0;
  for (int j = 0; j < r; ++j) {
    const auto mu = chart_gamma_[static_cast<std::size_t>(j)];
    if (mu == 0) continue;
    if (pt.t[j] == 0) return kNegInf;
    s += 2.0 * static_cast<double>(mu) * std::log(pt.t[j]);
  }
  for (int j = r; j < chart_->dim(); ++j) s += static_cast<double>(chart_gamma_[static_cast<std::size_t>(j)]) * pt.rho[j - r];
  return s - static_cast<double>(n_) * chart_->log_K(pt);
}

Vec Eigenfunction::orbit_anchor() const {
  if (!face_.is_interior()) throw PointNotInterior("gamma is on the boundary: no orbit peak");
  return invert_moment_map(o_, to_real(gamma_) / static_cast<double>(n_));
}

ChartPoint Eigenfunction::chart_anchor() const {
  const int r = chart_->split_r();
  const int m = chart_->dim();
  int zeros = 0;
  for (int j = 0; j < r; ++j) zeros += chart_gamma_[static_cast<std::size_t>(j)] == 0;
  if (zeros == r) {
    ChartPoint pt{Vec::Zero(r), Vec(m - r)};
    if (m > r) {
      Vec at(m - r);
      for (int j = r; j < m; ++j) at[j - r] = static_cast<double>(chart_gamma_[static_cast<std::size_t>(j)]) / static_cast<double>(n_);
      pt.rho = invert_face_moment(*chart_, at);
    }
    return pt;
  }
  if (zeros == 0 && face_.is_interior()) return chart_->from_orbit(orbit_anchor());
  throw DomainError("chart does not match the face of gamma");
}

IntegralResult Eigenfunction::integrate_orbit(const RealFunction& extra) const {
  if (!face_.is_interior()) throw PointNotInterior("the orbit route needs gamma in the interior of N P");
  const Vec g = to_real(gamma_);
  const double nn = static_cast<double>(n_);
  const auto& k = o_.character();
  const Vec anchor = orbit_anchor();
  const Mat A = k.derivatives(anchor).cov;
  const int m = o_.dim();
  const RadialSinhMap map(anchor, nn * A);
  RealFunction f = [&](const Vec& u) {
    const Vec rho = map.point(u);
    const auto d = k.derivatives(rho);
    const double det = small_determinant(d.cov);
    if (!(det > 0)) return kNegInf;
    double v = g.dot(rho) - nn * d.log_value + std::log(det) + map.log_jacobian(u);
    if (extra) v += extra(rho);
    return v;
  };
  const auto tb = find_box(f, Vec::Zero(m), map.limits(), opts_.drop, Vec::Constant(m, 0.3));
  return run(f, tb, opts_);
}

IntegralResult Eigenfunction::integrate_chart(const std::function<double(const ChartPoint&)>& extra) const {
  const int r = chart_->split_r();
  const int m = chart_->dim();
  const double nn = static_cast<double>(n_);
  const ChartPoint anchor_pt = chart_anchor();
  // Radial scales: the peak itself, or the Gaussian width e^{-N f t^2 / k_F} at t = 0.
  Vec lambda(r);
  Vec steps(m);
  Vec anchor(m);
  const Vec lf = chart_->log_f(anchor_pt.rho);
  double log_kF = 0;
  if (m > r) {
    log_kF = chart_->face_character().log_value(anchor_pt.rho);
  } else {
    log_kF = chart_->log_K(anchor_pt);
  }
  for (int j = 0; j < r; ++j) {
    if (anchor_pt.t[j] > 0) {
      lambda[j] = anchor_pt.t[j];
      anchor[j] = 0.5;
    } else {
      lambda[j] = std::sqrt(std::exp(log_kF - lf[j]) / nn);
      anchor[j] = 0;
    }
    steps[j] = 0.1;
  }
  const RadialSinhMap map(anchor_pt.rho, m > r ? Mat(nn * chart_->face_character().derivatives(anchor_pt.rho).cov)
                                                : Mat::Identity(0, 0));
  for (int j = r; j < m; ++j) {
    anchor[j] = 0;
    steps[j] = 0.3;
  }
  const double log2 = std::log(2.0);
  RealFunction f = [&, lambda](const Vec& y) {
    const Vec u = y.tail(m - r);
    ChartPoint pt{Vec(r), map.point(u)};
    double jac = map.log_jacobian(u);
    for (int j = 0; j < r; ++j) {
      if (y[j] >= 1) return kNegInf;
      if (y[j] <= 0) return kNegInf;
      pt.t[j] = lambda[j] * y[j] / (1 - y[j]);
      jac += log2 + std::log(pt.t[j]) + std::log(lambda[j]) - 2 * std::log1p(-y[j]);
    }
    const double L = chart_->L_density(pt);
    if (!(L > 0)) return kNegInf;
    double v = log_chi_sq(pt) + std::log(L) + jac;
    if (extra) v += extra(pt);
    return v;
  };
  Box limits{Vec(m), Vec(m)};
  const Box rho_limits = map.limits();
  for (int j = 0; j < r; ++j) {
    limits.lo[j] = 0;
    limits.hi[j] = 1;
  }
  for (int j = r; j < m; ++j) {
    limits.lo[j] = rho_limits.lo[j - r];
    limits.hi[j] = rho_limits.hi[j - r];
  }
  // find_box needs a finite anchor value; step off t = 0 where the measure t dt vanishes.
  Vec start = anchor;
  for (int j = 0; j < r; ++j)
    if (start[j] == 0) start[j] = 1e-3;
  const auto tb = find_box(f, start, limits, opts_.drop, steps);
  return run(f, tb, opts_);
}

IntegralResult norm_sq_exact(const OrbitModel& o, const IntVec& gamma, long n, const NormOptions& opts) {
  return Eigenfunction(o, gamma, n, opts).norm_result();
}

double eigenfunction_sq(const Eigenfunction& e, const Vec& rho) { return std::exp(e.log_sq(rho)); }
double eigenfunction_sq(const Eigenfunction& e, const ChartPoint& pt) { return std::exp(e.log_sq(pt)); }

double log_pointwise_asymptotic(const OrbitModel& o, const PeakData& peak, long n, const Vec& rho) {
  const double nn = static_cast<double>(n);
  return std::log(peak.cPx) + o.dim() / 2.0 * std::log(nn / kTwoPi) - nn * b_function(o, peak, rho);
}

double log_pointwise_asymptotic_boundary(const ChartModel& c, const ChartPeakData& peak, long n,
                                         const ChartPoint& pt) {
  const double nn = static_cast<double>(n);
  const int d = c.dim() + c.split_r();
  return std::log(peak.cPalpha) + d / 2.0 * std::log(nn / kTwoPi) - nn * s_and_Psi(c, peak, pt).Psi;
}

double log_pointwise_asymptotic_vertex(const ChartModel& c, const VertexPeak& peak, long n, const ChartPoint& pt) {
  const double nn = static_cast<double>(n);
  return peak.m * std::log(nn) - nn * (c.log_K(pt) - std::log(peak.K0));
}

double pointwise_asymptotic(const OrbitModel& o, const PeakData& peak, long n, const Vec& rho) {
  return std::exp(log_pointwise_asymptotic(o, peak, n, rho));
}

double pointwise_asymptotic_boundary(const ChartModel& c, const ChartPeakData& peak, long n, const ChartPoint& pt) {
  return std::exp(log_pointwise_asymptotic_boundary(c, peak, n, pt));
}

double pointwise_asymptotic_vertex(const ChartModel& c, const VertexPeak& peak, long n, const ChartPoint& pt) {
  return std::exp(log_pointwise_asymptotic_vertex(c, peak, n, pt));
}

PeakInfo peak_info(const Eigenfunction& e) {
  PeakInfo info;
  info.m = e.orbit().dim();
  info.r = e.face().codim;
  const double nn = static_cast<double>(e.N());
  if (info.r == 0) {
    info.kind = PeakKind::interior;
    info.interior = peak_data(e.orbit(), to_real(e.gamma()) / nn);
    info.c = info.interior->cPx;
  } else if (info.r < info.m) {
    info.kind = PeakKind::face;
    const auto& g = e.chart_gamma();
    Vec at(info.m - info.r);
    for (int j = info.r; j < info.m; ++j) at[j - info.r] = static_cast<double>(g[static_cast<std::size_t>(j)]) / nn;
    info.face = chart_peak(e.chart(), at);
    info.c = info.face->cPalpha;
  } else {
    info.kind = PeakKind::vertex;
    info.vertex = vertex_peak(e.chart(), e.chart().chart().v0);
    info.c = info.vertex->cPalpha;
  }
  return info;
}

NormReport l2k_norm(const OrbitModel& o, const IntVec& gamma, long n, int k, const NormOptions& opts) {
  if (k < 1) throw DomainError("k must be a positive integer");
  NormReport rep;
  rep.N = n;
  rep.k = k;
  const Eigenfunction e(o, gamma, n, opts);
  rep.route = to_string(e.route());
  if (k == 1) {
    rep.exact = 1;
  } else {
    IntVec kg(gamma);
    for (auto& x : kg) x *= k;
    const Eigenfunction ek(o, kg, n * k, opts);
    rep.exact = std::exp(ek.log_norm_sq() - k * e.log_norm_sq());
  }
  const auto info = peak_info(e);
  const double nn = static_cast<double>(n);
  const double kk = k;
  if (info.kind == PeakKind::vertex) {
    rep.asymptotic = std::pow(kk, -info.m) * std::pow(nn, (k - 1) * info.m);
  } else {
    const double d = info.m + info.r;
    rep.asymptotic = std::pow(info.c, k - 1) * std::pow(kk, -d / 2) * std::pow(nn / kTwoPi, (k - 1) * d / 2);
  }
  rep.ratio = rep.exact / rep.asymptotic;
  return rep;
}

SupReport sup_norm(const OrbitModel& o, const IntVec& gamma, long n, const NormOptions& opts) {
  const Eigenfunction e(o, gamma, n, opts);
  const auto info = peak_info(e);
  const double nn = static_cast<double>(n);
  SupReport rep;
  if (info.kind == PeakKind::interior) {
    rep.argmax_rho = info.interior->rho_x;
    rep.value = std::exp(e.log_sq(rep.argmax_rho));
    rep.limit = info.c * std::pow(nn / kTwoPi, info.m / 2.0);
  } else {
    const auto pt = e.chart_anchor();
    rep.argmax_rho = pt.rho;
    rep.argmax_t = pt.t;
    rep.value = std::exp(e.log_sq(pt));
    rep.limit = info.kind == PeakKind::vertex ? std::pow(nn, info.m)
                                              : info.c * std::pow(nn / kTwoPi, (info.m + info.r) / 2.0);
  }
  rep.ratio = rep.value / rep.limit;
  return rep;
}

double Polynomial::operator()(const Vec& x) const {
  double s = 0;
  for (const auto& [c, e] : terms) {
    double t = c;
    for (std::size_t j = 0; j < e.size(); ++j) t *= std::pow(x[static_cast<Eigen::Index>(j)], static_cast<double>(e[j]));
    s += t;
  }
  return s;
}

double Polynomial::bound(const Polytope& p) const {
  const int m = p.dim();
  Vec mx = Vec::Zero(m);
  for (const auto& v : p.vertices())
    for (int j = 0; j < m; ++j) mx[j] = std::max(mx[j], std::abs(static_cast<double>(v[static_cast<std::size_t>(j)])));
  double b = 0;
  for (const auto& [c, e] : terms) {
    double t = std::abs(c);
    for (std::size_t j = 0; j < e.size(); ++j) t *= std::pow(mx[static_cast<Eigen::Index>(j)], static_cast<double>(e[j]));
    b += t;
  }
  return b;
}

LocalizationReport localization_integral(const OrbitModel& o, const IntVec& gamma, long n, const Polynomial& sigma,
                                         const NormOptions& opts) {
  const Eigenfunction e(o, gamma, n, opts);
  // Shift sigma to a positive function so the log-domain engine applies.
  const double shift = sigma.bound(o.polytope()) + 1;
  IntegralResult r;
  if (e.route() == Route::orbit) {
    r = e.integrate_orbit([&](const Vec& rho) { return std::log(sigma(moment_map(o, rho)) + shift); });
  } else {
    const auto& c = e.chart();
    r = e.integrate_chart([&](const ChartPoint& pt) { return std::log(sigma(c.moment_in_P(pt)) + shift); });
  }
  LocalizationReport rep;
  rep.value = std::exp(r.log_value - e.log_norm_sq()) - shift;
  rep.target = sigma(to_real(gamma) / static_cast<double>(n));
  rep.error = std::abs(rep.value - rep.target);
  return rep;
}

IntegralResult pushforward_volume(const OrbitModel& o, const NormOptions& opts) {
  const auto& p = o.polytope();
  Vec x = Vec::Zero(p.dim());
  for (const auto& v : p.vertices()) x += to_real(v);
  x /= static_cast<double>(p.vertices().size());
  const Vec anchor = invert_moment_map(o, x);
  const RadialSinhMap map(anchor, hessian_A(o, anchor));
  RealFunction f = [&](const Vec& u) {
    const double det = volume_density(o, map.point(u));
    return det > 0 ? std::log(det) + map.log_jacobian(u) : kNegInf;
  };
  const auto tb = find_box(f, Vec::Zero(p.dim()), map.limits(), opts.drop, Vec::Constant(p.dim(), 0.3));
  return run(f, tb, opts);
}

}  // namespace toricdist
