#pragma once

#include <map>
#include <vector>

#include "toricdist/exponential_sum.hpp"
#include "toricdist/polytope.hpp"

namespace toricdist {

/// Squared moduli |c_beta|^2 > 0 of the embedding constants, aligned with
/// Polytope::lattice_points().
class WeightSet {
 public:
  WeightSet() = default;
  explicit WeightSet(std::vector<double> weights);

  static WeightSet unit(const Polytope& p);
  static WeightSet from_map(const Polytope& p, const std::map<IntVec, double>& weights);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const noexcept { return w_; }
  Vec log_values() const;
  double min() const;

 private:
  std::vector<double> w_;
};

/// Everything needed to evaluate the open-orbit objects of (P, w).
class OrbitModel {
 public:
  OrbitModel(const Polytope& p, const WeightSet& w);

  const Polytope& polytope() const noexcept { return p_; }
  const WeightSet& weights() const noexcept { return w_; }
  const ExponentialSum& character() const noexcept { return k_; }
  int dim() const noexcept { return p_.dim(); }

 private:
  Polytope p_;
  WeightSet w_;
  ExponentialSum k_;
};

/// Peak of the interior localization: rho_x solves mu(rho_x) = x.
struct PeakData {
  Vec x;
  Vec rho_x;
  Mat A;
  double detA = 0;
  double cPx = 0;       ///< 1 / sqrt(det A)
  double f_at_peak = 0;  ///< f(x, rho_x)
};

struct TailBound {
  double M = 0;   ///< min over |rho|=1, x in K of max_beta <rho, beta - x>
  double c0 = 0;  ///< min_beta w_beta
};

/// log k(rho) = log sum_beta w_beta e^{<rho,beta>}.
double character_k(const OrbitModel& o, const Vec& rho);
/// f(x, rho) = log k(rho) - <rho, x>.
double f_value(const OrbitModel& o, const Vec& x, const Vec& rho);
Vec moment_map(const OrbitModel& o, const Vec& rho);
Mat hessian_A(const OrbitModel& o, const Vec& rho);
/// Throws PointNotInterior for x outside the open polytope.
Vec invert_moment_map(const OrbitModel& o, const Vec& x, const NewtonOptions& opts = {});
PeakData peak_data(const OrbitModel& o, const Vec& x, const NewtonOptions& opts = {});
/// b_x(rho) = f(x, rho) - f(x, rho_x) >= 0.
double b_function(const OrbitModel& o, const PeakData& peak, const Vec& rho);
/// det A(rho); the density of the volume form after integrating out the torus.
double volume_density(const OrbitModel& o, const Vec& rho);
/// Throws MarginTooSmall when some point of K is (numerically) on the boundary.
TailBound tail_bound(const OrbitModel& o, const std::vector<Vec>& K);

/// Unit directions used by tail_bound: 2 (m=1), 360 (m=2), 64^2 (m=3),
/// axis and diagonal directions plus a fixed pseudo-random sample otherwise.
std::vector<Vec> sphere_directions(int m);

/// Radius R such that w_min e^{N R M} e^{-N f(x, rho_x)} exceeds peak/tol outside
/// the ball |rho - rho_x| <= R, with a 25% margin.
double truncation_radius(const OrbitModel& o, const PeakData& peak, long n, double tol);

}  // namespace toricdist
