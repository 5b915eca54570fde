#include "toricdist/orbit_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "toricdist/error.hpp"

namespace toricdist {

WeightSet::WeightSet(std::vector<double> weights) : w_(std::move(weights)) {
  for (double x : w_) {
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("weights must be finite and strictly positive");
  }
}

WeightSet WeightSet::unit(const Polytope& p) { return WeightSet(std::vector<double>(p.lattice_points().size(), 1.0)); }

WeightSet WeightSet::from_map(const Polytope& p, const std::map<IntVec, double>& weights) {
  std::vector<double> w;
  for (const auto& beta : p.lattice_points()) {
    auto it = weights.find(beta);
    if (it == weights.end()) throw ParseError("missing weight for lattice point " + to_string(beta));
    w.push_back(it->second);
  }
  if (weights.size() != w.size()) throw ParseError("weights given for points outside the polytope");
  return WeightSet(std::move(w));
}

Vec WeightSet::log_values() const {
  Vec out(static_cast<Eigen::Index>(w_.size()));
  for (std::size_t i = 0; i < w_.size(); ++i) out[static_cast<Eigen::Index>(i)] = std::log(w_[i]);
  return out;
}

double WeightSet::min() const { return *std::min_element(w_.begin(), w_.end()); }

OrbitModel::OrbitModel(const Polytope& p, const WeightSet& w)
    : p_(p), w_(w), k_(p.lattice_matrix(), [&] {
        if (w.size() != p.lattice_points().size()) throw DomainError("weight set does not match the polytope");
        return w.log_values();
      }()) {}

double character_k(const OrbitModel& o, const Vec& rho) { return o.character().log_value(rho); }

double f_value(const OrbitModel& o, const Vec& x, const Vec& rho) { return o.character().log_value(rho) - rho.dot(x); }

Vec moment_map(const OrbitModel& o, const Vec& rho) { return o.character().derivatives(rho).mean; }

Mat hessian_A(const OrbitModel& o, const Vec& rho) { return o.character().derivatives(rho).cov; }

Vec invert_moment_map(const OrbitModel& o, const Vec& x, const NewtonOptions& opts) {
  if (!o.polytope().strictly_contains(x, 1e-12)) {
    throw PointNotInterior("moment map inversion needs an interior point; the gradient equation has no finite solution on the boundary");
  }
  return o.character().solve_mean(x, opts);
}

PeakData peak_data(const OrbitModel& o, const Vec& x, const NewtonOptions& opts) {
  PeakData pk;
  pk.x = x;
  pk.rho_x = invert_moment_map(o, x, opts);
  const auto d = o.character().derivatives(pk.rho_x);
  pk.A = d.cov;
  pk.detA = pk.A.determinant();
  pk.cPx = 1.0 / std::sqrt(pk.detA);
  pk.f_at_peak = d.log_value - pk.rho_x.dot(x);
  return pk;
}

double b_function(const OrbitModel& o, const PeakData& peak, const Vec& rho) {
  return f_value(o, peak.x, rho) - peak.f_at_peak;
}

double volume_density(const OrbitModel& o, const Vec& rho) { return small_determinant(hessian_A(o, rho)); }

std::vector<Vec> sphere_directions(int m) {
  std::vector<Vec> dirs;
  if (m == 1) {
    dirs.push_back(Vec::Constant(1, 1.0));
    dirs.push_back(Vec::Constant(1, -1.0));
  } else if (m == 2) {
    for (int i = 0; i < 360; ++i) {
      const double a = 2 * std::numbers::pi * i / 360.0;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
  } else if (m == 3) {
    for (int i = 0; i < 64; ++i) {
      const double z = -1.0 + (2.0 * i + 1.0) / 64.0;
      const double s = std::sqrt(1 - z * z);
      for (int j = 0; j < 64; ++j) {
        const double a = 2 * std::numbers::pi * j / 64.0;
        Vec v(3);
        v << s * std::cos(a), s * std::sin(a), z;
        dirs.push_back(v);
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      Vec v = Vec::Zero(m);
      v[i] = 1;
      dirs.push_back(v);
      dirs.push_back(-v);
    }
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 4096; ++k) {
      Vec v(m);
      for (int i = 0; i < m; ++i) v[i] = nd(rng);
      dirs.push_back(v.normalized());
    }
  }
  return dirs;
}

TailBound tail_bound(const OrbitModel& o, const std::vector<Vec>& K) {
  const auto& pts = o.polytope().lattice_matrix();
  double M = std::numeric_limits<double>::infinity();
  for (const auto& dir : sphere_directions(o.dim())) {
    const Vec proj = pts.transpose() * dir;
    const double best = proj.maxCoeff();
    for (const auto& x : K) M = std::min(M, best - dir.dot(x));
  }
  if (!(M > 1e-12)) throw MarginTooSmall("tail bound margin M(K) is not positive: K touches the boundary");
  return {M, o.weights().min()};
}

double truncation_radius(const OrbitModel& o, const PeakData& peak, long n, double tol) {
  const auto tb = tail_bound(o, {peak.x});
  const double nn = static_cast<double>(n);
  // e^{-N f(x,rho)} <= c0^{-N} e^{-N |rho| M}; require this below tol * e^{-N f(x, rho_x)}.
  const double r = (std::log(1.0 / tol) / nn + peak.f_at_peak - std::log(tb.c0)) / tb.M;
  return 1.25 * std::max(r, 0.0) + peak.rho_x.norm();
}

}  // namespace toricdist
