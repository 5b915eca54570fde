#pragma once

#include <cstdint>
#include <vector>

#include "toricdist/orbit_geometry.hpp"

namespace toricdist {

/// Closed forms for P = p Sigma with multinomial weights w_alpha = p! / alpha_hat!,
/// where alpha_hat = (p - |alpha|, alpha_1, ..., alpha_m). All factorials go
/// through lgamma.

struct HomogenizedIndex {
  std::vector<double> alpha_hat;  ///< length m + 1, sums to p
  std::vector<int> J;             ///< indices j with alpha_hat_j != 0
  int r = 0;                      ///< m + 1 - #J: number of vanishing entries
  int d = 0;                      ///< m + r
};
HomogenizedIndex homogenize(double p, const Vec& alpha);

/// Multinomial weights aligned with standard_simplex(m, p).lattice_points().
WeightSet binomial_weights(std::int64_t p, int m);
/// Same weights for the lattice points of a polytope contained in p Sigma.
WeightSet binomial_weights(const Polytope& poly, std::int64_t p);

/// log ||chi_gamma||^2 = log(p^m gamma_hat! / (Np + m)!), gamma_hat = (Np - |gamma|, gamma).
double log_norm_sq_closed_form(std::int64_t p, std::int64_t n, const IntVec& gamma);

/// ||phi_gamma||_q^q for gamma in N p Sigma:
/// [(Np+m)! / gamma_hat!]^{q/2} prod Gamma(q gamma_hat_j / 2 + 1) / (p^{m(q/2-1)} Gamma(Npq/2 + m + 1)).
double lq_norm_exact(std::int64_t p, std::int64_t n, const IntVec& gamma, double q);
double log_lq_norm_exact(std::int64_t p, std::int64_t n, const IntVec& gamma, double q);

struct StirlingPrediction {
  /// Leading term of ||phi||_q^{2q}:
  /// (N/2pi)^{(q/2-1)d} p^{q/2-1} (2pi)^{r(q-2)} / ((q/2)^d (prod_J alpha_hat_j)^{q/2-1}).
  double norm_q_2q = 0;
  /// Its square root, the leading term of ||phi||_q^q.
  double norm_q_q = 0;
  /// Leading term of ||phi||_inf^2: (2pi)^r (p / prod_J alpha_hat_j)^{1/2} (N/2pi)^{d/2}.
  double sup_sq = 0;
  HomogenizedIndex index;
};
StirlingPrediction stirling_asymptotics(std::int64_t p, const IntVec& alpha, double q, std::int64_t n);

/// ||phi_{N alpha}||_inf^2 = p^{-m} (Np+m)! / (N alpha_hat)! [prod alpha_hat_j^{alpha_hat_j} / p^p]^N.
double sup_norm_exact(std::int64_t p, std::int64_t n, const IntVec& alpha);

/// det A(p Sigma, alpha) = (p - |alpha|) alpha_1 ... alpha_m / p.
double detA_closed_form(double p, const Vec& alpha);

/// b_alpha(rho) = p log(1 + sum e^{rho_j}) - <alpha, rho> + <alpha_hat, log alpha_hat> - p log p,
/// with |z_j|^2 = e^{rho_j}.
double b_closed_form(double p, const Vec& alpha, const Vec& rho);

/// (N/2pi)^{m/2} p^{1/2} e^{-(<Delta u, u> - <alpha, u>^2 / p) / 2} / sqrt((p - |alpha|) prod alpha),
/// the profile of |phi|^2 at rho = rho_alpha + u / sqrt(N).
double gaussian_profile(double p, const Vec& alpha, std::int64_t n, const Vec& u);

/// rho_alpha: e^{rho_j} = alpha_j / (p - |alpha|).
Vec peak_rho_closed_form(double p, const Vec& alpha);

}  // namespace toricdist
