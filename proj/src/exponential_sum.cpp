#include "toricdist/exponential_sum.hpp"

#include <cmath>
#include <limits>

#include "toricdist/error.hpp"

namespace toricdist {

double log_sum_exp(const Vec& v) {
  const double mx = v.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - mx);
  return mx + std::log(s);
}

ExponentialSum::ExponentialSum(Mat points, Vec log_weights)
    : points_(std::move(points)), log_weights_(std::move(log_weights)) {
  if (points_.cols() != log_weights_.size()) throw DomainError("ExponentialSum: points and weights differ in size");
  if (points_.cols() == 0) throw DomainError("ExponentialSum: empty point set");
}

double ExponentialSum::log_value(const Vec& rho) const {
  return log_sum_exp((points_.transpose() * rho + log_weights_).eval());
}

ExponentialSum::Derivatives ExponentialSum::derivatives(const Vec& rho) const {
  Vec p = points_.transpose() * rho + log_weights_;
  const double mx = p.maxCoeff();
  double s = 0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    p[j] = std::exp(p[j] - mx);
    s += p[j];
  }
  p /= s;
  Derivatives d;
  d.log_value = mx + std::log(s);
  d.mean = points_ * p;
  const Eigen::Index m = points_.rows();
  d.cov = Mat::Zero(m, m);
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    for (Eigen::Index a = 0; a < m; ++a) {
      const double wa = p[j] * (points_(a, j) - d.mean[a]);
      for (Eigen::Index b = 0; b <= a; ++b) d.cov(a, b) += wa * (points_(b, j) - d.mean[b]);
    }
  }
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < a; ++b) d.cov(b, a) = d.cov(a, b);
  return d;
}

Vec ExponentialSum::solve_mean(const Vec& target, const NewtonOptions& opts, const Vec* start) const {
  Vec rho = start ? *start : Vec::Zero(dim());
  auto objective = [&](const Vec& r) { return log_value(r) - r.dot(target); };
  double g = objective(rho);
  for (int it = 0; it < opts.max_iter; ++it) {
    const auto d = derivatives(rho);
    const Vec grad = d.mean - target;
    const double gnorm = grad.norm();
    if (gnorm <= opts.grad_tol) return rho;
    Eigen::LDLT<Mat> ldlt(d.cov);
    Vec step = -ldlt.solve(grad);
    if (!step.allFinite()) step = -grad;
    // Near the solution the full step is within the quadratic region; the
    // objective difference is below rounding there, so skip the line search.
    if (gnorm < 1e-6) {
      rho += step;
      g = objective(rho);
      continue;
    }
    double t = 1.0;
    const double slope = grad.dot(step);
    while (t > 1e-20) {
      const Vec trial = rho + t * step;
      const double gt = objective(trial);
      if (std::isfinite(gt) && gt <= g + 1e-4 * t * slope) {
        rho = trial;
        g = gt;
        break;
      }
      t *= 0.5;
    }
    if (t <= 1e-20) break;
  }
  const auto d = derivatives(rho);
  const double gnorm = (d.mean - target).norm();
  if (gnorm <= std::max(opts.grad_tol, 1e-9)) return rho;
  throw NoConvergence("Newton moment inversion did not converge (gradient norm " + std::to_string(gnorm) + ")");
}

}  // namespace toricdist
