#pragma once

#include <functional>
#include <vector>

#include "toricdist/types.hpp"

namespace toricdist {

using RealFunction = std::function<double(const Vec&)>;
using Predicate = std::function<bool(const Vec&)>;

struct Box {
  Vec lo;
  Vec hi;

  int dim() const noexcept { return static_cast<int>(lo.size()); }
  Vec center() const { return (lo + hi) / 2; }
  Vec half_widths() const { return (hi - lo) / 2; }
  double volume() const { return (hi - lo).prod(); }
  static Box around(const Vec& center, const Vec& half_widths) { return {center - half_widths, center + half_widths}; }
};

enum class Rule { trapezoid, gauss_legendre };

struct QuadratureSpec {
  Box box;
  /// Gauss-Legendre nodes per subinterval, trapezoid intervals at level 0,
  /// or base cells per dimension for region_volume.
  int base_points_per_dim = 16;
  int refinement_limit = 7;
  double rel_tol = 1e-10;
  Rule rule = Rule::gauss_legendre;
  /// Evaluations are spread over this many threads; the reduction order is
  /// fixed, so the result does not depend on it.
  int workers = 1;
  /// Box faces that are natural edges of the integration domain (for
  /// region_volume: the region may touch them). Empty means none.
  std::vector<bool> lower_is_edge;
  std::vector<bool> upper_is_edge;
  /// Carried into IntegralResult::tail_bound (relative size of the integrand
  /// on the truncation boundary).
  double tail_bound = 0;
};

struct IntegralResult {
  double value = 0;
  double log_value = 0;  ///< log(value) for Laplace integrals
  double est_error = 0;  ///< relative
  double tail_bound = 0;
  long long n_evals = 0;
  int levels = 0;
  bool converged = false;
};

/// Integral over spec.box of exp(log_integrand), computed in the log domain.
/// Composite rule refined until successive levels agree to rel_tol and the
/// change before that was below sqrt(rel_tol) (Gauss subintervals 1, 2, 3, 4,
/// 6, 8, ... per axis; trapezoid intervals doubled); throws NoConvergence
/// otherwise.
IntegralResult laplace_integral(const RealFunction& log_integrand, const QuadratureSpec& spec);
/// Integral of exp(-n * phase + log_weight).
IntegralResult laplace_integral(const RealFunction& phase, const RealFunction& log_weight, double n,
                                const QuadratureSpec& spec);

/// Integral of weight over {condition}. Cells whose corners and center
/// agree are integrated with a 3-point Gauss rule per dimension; mixed cells
/// are bisected up to a depth that grows per level, and the ones left at the
/// final depth count with half weight (that mass is the error estimate).
/// Throws RegionTouchesBoundary if the condition holds on a box face that is
/// not a domain edge.
IntegralResult region_volume(const Predicate& condition, const RealFunction& weight, const QuadratureSpec& spec);

struct TruncatedBox {
  Box box;
  double peak_log = 0;
  double boundary_log_max = 0;  ///< max of log_f sampled on the non-edge faces
  std::vector<bool> lower_is_edge;
  std::vector<bool> upper_is_edge;
};

/// Box around `anchor`, inside `limits`, outside of which log_f has dropped
/// by at least `drop` below its peak. Axis search, then grid samples on every
/// face enlarge the box until the drop holds there as well.
TruncatedBox find_box(const RealFunction& log_f, const Vec& anchor, const Box& limits, double drop,
                      const Vec& initial_steps);

/// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Compensated summation.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const noexcept { return s_; }

 private:
  double s_ = 0;
  double c_ = 0;
};

/// Fills out[i] = f(i) for i < n using `workers` threads on contiguous chunks.
void parallel_fill(std::vector<double>& out, const std::function<double(std::size_t)>& f, int workers);

}  // namespace toricdist
