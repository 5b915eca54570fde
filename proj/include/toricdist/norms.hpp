#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toricdist/chart_geometry.hpp"
#include "toricdist/orbit_geometry.hpp"
#include "toricdist/quadrature.hpp"

namespace toricdist {

/// How ||chi_gamma||^2 is integrated: over the open orbit in rho, or over a
/// vertex chart in (t, rho). `automatic` picks the orbit for interior gamma
/// and the chart of the face otherwise.
enum class Route { automatic, orbit, chart };

struct NormOptions {
  Route route = Route::automatic;
  double rel_tol = 1e-10;
  int workers = 1;
  int base_points = 16;
  int refinement_limit = 10;
  /// Truncation: the box is grown until the log integrand is this far below its peak.
  double drop = 40;
  /// Chart vertex; defaults to the lexicographically smallest vertex of the face.
  std::optional<IntVec> v0;
};

/// chi_gamma at level N (gamma in N P) with its L^2 norm.
///
/// |chi_gamma|^2 = e^{<rho, gamma> - N log k(rho)} on the open orbit and
/// t^{2 mu} e^{<rho, nu>} / K^N in the chart, where (mu, nu) = Gamma (gamma - N v0).
class Eigenfunction {
 public:
  Eigenfunction(const OrbitModel& o, IntVec gamma, long n, const NormOptions& opts = {});

  const OrbitModel& orbit() const noexcept { return o_; }
  const IntVec& gamma() const noexcept { return gamma_; }
  long N() const noexcept { return n_; }
  /// Face of N P containing gamma.
  const Face& face() const noexcept { return face_; }
  /// Route actually used for the norm.
  Route route() const noexcept { return route_; }
  const ChartModel& chart() const { return *chart_; }
  /// Gamma (gamma - N v0).
  const IntVec& chart_gamma() const noexcept { return chart_gamma_; }

  double log_norm_sq() const noexcept { return norm_.log_value; }
  const IntegralResult& norm_result() const noexcept { return norm_; }

  /// log |chi|^2 (unnormalized) and log |phi|^2 (normalized).
  double log_chi_sq(const Vec& rho) const;
  double log_chi_sq(const ChartPoint& pt) const;
  double log_sq(const Vec& rho) const { return log_chi_sq(rho) - norm_.log_value; }
  double log_sq(const ChartPoint& pt) const { return log_chi_sq(pt) - norm_.log_value; }

  /// log of the integral of |chi|^2 e^{extra} against the volume form.
  /// `extra` is given on orbit points (orbit route) or chart points (chart route).
  IntegralResult integrate_orbit(const RealFunction& extra) const;
  IntegralResult integrate_chart(const std::function<double(const ChartPoint&)>& extra) const;

  /// Peak of |chi|^2: rho_x on the orbit, or the chart point (t, rho).
  Vec orbit_anchor() const;
  ChartPoint chart_anchor() const;

 private:
  OrbitModel o_;
  IntVec gamma_;
  long n_;
  NormOptions opts_;
  Face face_;
  Route route_;
  std::optional<ChartModel> chart_;
  IntVec chart_gamma_;
  IntegralResult norm_;
};

/// ||chi_gamma||^2 at level N.
IntegralResult norm_sq_exact(const OrbitModel& o, const IntVec& gamma, long n, const NormOptions& opts = {});
/// |phi_gamma|^2 at an orbit point.
double eigenfunction_sq(const Eigenfunction& e, const Vec& rho);
double eigenfunction_sq(const Eigenfunction& e, const ChartPoint& pt);

/// c(P,x) (N/2pi)^{m/2} e^{-N b_x(rho)}.
double pointwise_asymptotic(const OrbitModel& o, const PeakData& peak, long n, const Vec& rho);
/// (2pi)^r (N/2pi)^{(m+r)/2} e^{-N Psi} / sqrt(det A_F).
double pointwise_asymptotic_boundary(const ChartModel& c, const ChartPeakData& peak, long n, const ChartPoint& pt);
/// N^m e^{-N (log K - log K(0))}.
double pointwise_asymptotic_vertex(const ChartModel& c, const VertexPeak& peak, long n, const ChartPoint& pt);
/// Logarithms of the three predictions (no underflow far from the peak).
double log_pointwise_asymptotic(const OrbitModel& o, const PeakData& peak, long n, const Vec& rho);
double log_pointwise_asymptotic_boundary(const ChartModel& c, const ChartPeakData& peak, long n, const ChartPoint& pt);
double log_pointwise_asymptotic_vertex(const ChartModel& c, const VertexPeak& peak, long n, const ChartPoint& pt);

enum class PeakKind { interior, face, vertex };

/// Which asymptotic branch applies to gamma and its constants.
struct PeakInfo {
  PeakKind kind = PeakKind::interior;
  int m = 0;
  int r = 0;
  double c = 0;  ///< c(P, alpha)
  std::optional<PeakData> interior;
  std::optional<ChartPeakData> face;
  std::optional<VertexPeak> vertex;
};
PeakInfo peak_info(const Eigenfunction& e);

struct NormReport {
  double exact = 0;
  double asymptotic = 0;
  double ratio = 0;
  long N = 0;
  int k = 0;
  std::string route;
};

/// ||phi_gamma||_{2k}^{2k} = ||chi_{k gamma}||^2_{kN} / ||chi_gamma||^{2k}_N, against
/// c^{k-1} k^{-d/2} (N/2pi)^{(k-1)d/2} (interior d = m, face d = m + r) or
/// k^{-m} N^{(k-1)m} (vertex).
NormReport l2k_norm(const OrbitModel& o, const IntVec& gamma, long n, int k, const NormOptions& opts = {});

struct SupReport {
  double value = 0;  ///< ||phi||_inf^2
  double limit = 0;  ///< predicted leading term
  double ratio = 0;
  Vec argmax_rho;    ///< orbit coordinates (interior) or chart rho
  Vec argmax_t;      ///< chart radial coordinates (empty for interior)
};
SupReport sup_norm(const OrbitModel& o, const IntVec& gamma, long n, const NormOptions& opts = {});

/// Polynomial in the action variables: sum of coef * I^exponent.
struct Polynomial {
  std::vector<std::pair<double, IntVec>> terms;
  double operator()(const Vec& x) const;
  /// Bound for |sigma| on P from the vertex coordinates.
  double bound(const Polytope& p) const;
};

struct LocalizationReport {
  double value = 0;   ///< integral of sigma(I) |phi|^2 dVol
  double target = 0;  ///< sigma(gamma / N)
  double error = 0;   ///< |value - target|
};
LocalizationReport localization_integral(const OrbitModel& o, const IntVec& gamma, long n, const Polynomial& sigma,
                                         const NormOptions& opts = {});

/// Integral of det A(rho) over R^m, which equals vol(P).
IntegralResult pushforward_volume(const OrbitModel& o, const NormOptions& opts = {});

std::string to_string(Route r);

}  // namespace toricdist
