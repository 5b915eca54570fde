#pragma once

#include "toricdist/types.hpp"

namespace toricdist {

struct NewtonOptions {
  double grad_tol = 1e-12;
  int max_iter = 200;
};

/// The convex function rho -> log sum_j w_j exp(<rho, p_j>), evaluated with a
/// max-shift. Its gradient is the weighted mean of the points and its Hessian
/// the weighted covariance; both are computed in one pass.
class ExponentialSum {
 public:
  /// points: dim x n, log_weights: n.
  ExponentialSum(Mat points, Vec log_weights);

  int dim() const noexcept { return static_cast<int>(points_.rows()); }
  Eigen::Index size() const noexcept { return points_.cols(); }
  const Mat& points() const noexcept { return points_; }
  const Vec& log_weights() const noexcept { return log_weights_; }

  double log_value(const Vec& rho) const;

  struct Derivatives {
    double log_value = 0;
    Vec mean;  ///< gradient of log_value
    Mat cov;   ///< Hessian of log_value
  };
  Derivatives derivatives(const Vec& rho) const;

  /// Solves mean(rho) = target by damped Newton on log_value(rho) - <rho, target>.
  /// The caller guarantees target lies in the interior of the convex hull.
  Vec solve_mean(const Vec& target, const NewtonOptions& opts = {}, const Vec* start = nullptr) const;

 private:
  Mat points_;
  Vec log_weights_;
};

/// log(sum exp(v)) with max shift; -inf entries are skipped.
double log_sum_exp(const Vec& v);

}  // namespace toricdist
