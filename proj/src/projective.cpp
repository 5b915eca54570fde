#include "toricdist/projective.hpp"

#include <cmath>
#include <numbers>

#include "toricdist/error.hpp"

namespace toricdist {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::vector<double> hat(double total, const Vec& v) {
  std::vector<double> h{total - v.sum()};
  for (Eigen::Index j = 0; j < v.size(); ++j) h.push_back(v[j]);
  return h;
}

void require_nonnegative(const std::vector<double>& h) {
  for (double x : h)
    if (x < 0) throw PointOutsidePolytope("index lies outside p Sigma");
}

}  // namespace

HomogenizedIndex homogenize(double p, const Vec& alpha) {
  HomogenizedIndex h;
  h.alpha_hat = hat(p, alpha);
  require_nonnegative(h.alpha_hat);
  for (std::size_t j = 0; j < h.alpha_hat.size(); ++j)
    if (h.alpha_hat[j] != 0) h.J.push_back(static_cast<int>(j));
  const int m = static_cast<int>(alpha.size());
  h.r = m + 1 - static_cast<int>(h.J.size());
  h.d = m + h.r;
  return h;
}

WeightSet binomial_weights(std::int64_t p, int m) { return binomial_weights(standard_simplex(m, p), p); }

WeightSet binomial_weights(const Polytope& poly, std::int64_t p) {
  if (p < 1) throw DomainError("p must be positive");
  std::vector<double> w;
  const double lp = std::lgamma(static_cast<double>(p) + 1);
  for (const auto& beta : poly.lattice_points()) {
    const auto h = hat(static_cast<double>(p), to_real(beta));
    for (double x : h)
      if (x < 0) throw DomainError("binomial weights need the polytope inside p Sigma; " + to_string(beta) + " is not");
    double s = lp;
    for (double x : h) s -= std::lgamma(x + 1);
    w.push_back(std::round(std::exp(s)));
  }
  return WeightSet(std::move(w));
}

double log_norm_sq_closed_form(std::int64_t p, std::int64_t n, const IntVec& gamma) {
  const double np = static_cast<double>(n * p);
  const auto h = hat(np, to_real(gamma));
  require_nonnegative(h);
  const double m = static_cast<double>(gamma.size());
  double s = m * std::log(static_cast<double>(p)) - std::lgamma(np + m + 1);
  for (double x : h) s += std::lgamma(x + 1);
  return s;
}

double log_lq_norm_exact(std::int64_t p, std::int64_t n, const IntVec& gamma, double q) {
  if (!(q >= 1)) throw DomainError("q must be at least 1");
  const double np = static_cast<double>(n * p);
  const auto h = hat(np, to_real(gamma));
  require_nonnegative(h);
  const double m = static_cast<double>(gamma.size());
  double s = std::lgamma(np + m + 1);
  for (double x : h) s -= std::lgamma(x + 1);
  s *= q / 2;
  for (double x : h) s += std::lgamma(q * x / 2 + 1);
  s -= m * (q / 2 - 1) * std::log(static_cast<double>(p));
  s -= std::lgamma(np * q / 2 + m + 1);
  return s;
}

double lq_norm_exact(std::int64_t p, std::int64_t n, const IntVec& gamma, double q) {
  return std::exp(log_lq_norm_exact(p, n, gamma, q));
}

StirlingPrediction stirling_asymptotics(std::int64_t p, const IntVec& alpha, double q, std::int64_t n) {
  StirlingPrediction sp;
  const double pp = static_cast<double>(p);
  sp.index = homogenize(pp, to_real(alpha));
  const double d = sp.index.d;
  const double r = sp.index.r;
  double prodJ = 1;
  for (int j : sp.index.J) prodJ *= sp.index.alpha_hat[static_cast<std::size_t>(j)];
  const double nn = static_cast<double>(n);
  const double e = q / 2 - 1;
  sp.norm_q_2q = std::pow(nn / kTwoPi, e * d) * std::pow(pp, e) * std::pow(kTwoPi, r * (q - 2)) /
                 (std::pow(q / 2, d) * std::pow(prodJ, e));
  sp.norm_q_q = std::sqrt(sp.norm_q_2q);
  sp.sup_sq = std::pow(kTwoPi, r) * std::sqrt(pp / prodJ) * std::pow(nn / kTwoPi, d / 2);
  return sp;
}

double sup_norm_exact(std::int64_t p, std::int64_t n, const IntVec& alpha) {
  const double pp = static_cast<double>(p);
  const double nn = static_cast<double>(n);
  const auto h = hat(pp, to_real(alpha));
  require_nonnegative(h);
  const double m = static_cast<double>(alpha.size());
  double s = -m * std::log(pp) + std::lgamma(nn * pp + m + 1);
  double inner = -pp * std::log(pp);
  for (double x : h) {
    s -= std::lgamma(nn * x + 1);
    if (x > 0) inner += x * std::log(x);
  }
  return std::exp(s + nn * inner);
}

double detA_closed_form(double p, const Vec& alpha) { return (p - alpha.sum()) * alpha.prod() / p; }

Vec peak_rho_closed_form(double p, const Vec& alpha) {
  const double a0 = p - alpha.sum();
  if (!(a0 > 0) || !(alpha.minCoeff() > 0)) throw PointNotInterior("closed-form peak needs an interior point");
  return (alpha.array() / a0).log().matrix();
}

double b_closed_form(double p, const Vec& alpha, const Vec& rho) {
  const auto h = hat(p, alpha);
  double s = p * std::log1p(rho.array().exp().sum()) - alpha.dot(rho) - p * std::log(p);
  for (double x : h) {
    if (!(x > 0)) throw PointNotInterior("closed-form b needs an interior point");
    s += x * std::log(x);
  }
  return s;
}

double gaussian_profile(double p, const Vec& alpha, std::int64_t n, const Vec& u) {
  const auto m = alpha.size();
  const double a0 = p - alpha.sum();
  const double quad = (alpha.array() * u.array().square()).sum() - std::pow(alpha.dot(u), 2) / p;
  return std::pow(static_cast<double>(n) / kTwoPi, m / 2.0) * std::sqrt(p) * std::exp(-quad / 2) /
         std::sqrt(a0 * alpha.prod());
}

}  // namespace toricdist
