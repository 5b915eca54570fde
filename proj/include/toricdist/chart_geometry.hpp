#pragma once

#include <optional>
#include <vector>

#include "toricdist/exponential_sum.hpp"
#include "toricdist/orbit_geometry.hpp"
#include "toricdist/polytope.hpp"

namespace toricdist {

/// Point of the chart with the torus phases integrated out: t = |xi| in
/// R_{>=0}^r and rho = log|zeta|^2 in R^{m-r}.
struct ChartPoint {
  Vec t;
  Vec rho;
};

/// K(xi, rho) = sum_{gamma in Q} a_gamma |xi^mu|^2 e^{<rho, nu>}, gamma = (mu, nu),
/// together with the face character k_F, the coefficients f_k and the volume
/// density L of the chart.
class ChartModel {
 public:
  ChartModel(const VertexChart& chart, const WeightSet& w);

  const VertexChart& chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_.dim(); }
  int split_r() const noexcept { return chart_.split_r; }
  int face_dim() const noexcept { return dim() - split_r(); }
  /// a_gamma aligned with chart().Q_points.
  const std::vector<double>& weights() const noexcept { return a_; }

  double log_K(const ChartPoint& pt) const;
  /// log K - <rho, target>.
  double s_value(const ChartPoint& pt, const Vec& target) const;
  /// Determinant of the mixed Wirtinger / rho Hessian of log K.
  double L_density(const ChartPoint& pt) const;
  /// Moment map of the full polytope expressed at a chart point (P coordinates).
  Vec moment_in_P(const ChartPoint& pt) const;

  /// Character of the face Q_F (points (0, nu)); requires split_r < dim.
  const ExponentialSum& face_character() const;
  /// log f_k(rho) = log sum_{(e_k, nu) in Q} a e^{<rho, nu>}, k = 1..r.
  Vec log_f(const Vec& rho) const;

  /// Orbit coordinates rho_full of a chart point with all t_j > 0.
  Vec to_orbit(const ChartPoint& pt) const;
  ChartPoint from_orbit(const Vec& rho_full) const;

 private:
  VertexChart chart_;
  std::vector<double> a_;
  std::vector<double> log_a_;
  std::vector<std::vector<int>> mu_;  ///< first r coordinates of each gamma
  Mat nu_;                            ///< (m - r) x n
  std::vector<Vec> p_points_;         ///< lattice points of P (for moment_in_P)
  std::optional<ExponentialSum> face_;
  std::vector<std::vector<std::size_t>> f_terms_;  ///< indices with mu = e_k
};

struct ChartPeakData {
  Vec alpha_tilde;
  Vec rho_F;
  Mat A_F;
  Vec f_k;
  double kF_at_peak = 0;
  double det_Hs = 0;
  Mat Hs;
  double L0 = 0;
  double cPalpha = 0;
  double s_at_peak = 0;
  /// Residuals of the two closed-form determinant identities.
  double det_Hs_residual = 0;
  double L0_residual = 0;
};

struct VertexPeak {
  double K0 = 0;       ///< |c_alpha|^2
  double cPalpha = 0;  ///< (2 pi)^m
  int m = 0;
};

/// a_gamma = w_{Gamma~^{-1} gamma}; returned as (gamma, a_gamma) pairs.
std::vector<std::pair<IntVec, double>> chart_weights(const VertexChart& chart, const WeightSet& w);
double K_value(const ChartModel& c, const ChartPoint& pt);  ///< log K

struct FaceCharacterValues {
  double log_kF = 0;
  Vec mu_F;
  Mat A_F;
};
FaceCharacterValues face_character_and_moment(const ChartModel& c, const Vec& rho);
Vec invert_face_moment(const ChartModel& c, const Vec& alpha_tilde, const NewtonOptions& opts = {});

struct SAndPsi {
  double s = 0;
  double Psi = 0;
};
SAndPsi s_and_Psi(const ChartModel& c, const ChartPeakData& peak, const ChartPoint& pt);

/// Peak data for a point whose chart image is (0, alpha_tilde), alpha_tilde
/// real and interior to Q_F; requires 1 <= r <= m - 1.
ChartPeakData chart_peak(const ChartModel& c, const Vec& alpha_tilde, const NewtonOptions& opts = {});
ChartPeakData chart_peak(const ChartModel& c, const IntVec& alpha);
/// Requires alpha = v0 (throws NotAVertex otherwise).
VertexPeak vertex_peak(const ChartModel& c, const IntVec& alpha);
double L_density(const ChartModel& c, const ChartPoint& pt);

/// Real Hessian block matrix diag(2f/k_F, 2f/k_F, A_F) in coordinates (x_j, y_j, rho).
Mat block_hessian(const Vec& f_k, double kF, const Mat& A_F);

}  // namespace toricdist
