#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toricdist/norms.hpp"

namespace toricdist {

struct DistributionOptions {
  /// Superlevel sets of concave exponents (open orbit, up to dimension 3) are
  /// integrated in polar coordinates around the peak to this tolerance.
  double rel_tol = 1e-8;
  /// Other sets (charts) go through region_volume on cell grids, whose
  /// boundary mass shrinks only like the cell size.
  double region_rel_tol = 1e-3;
  int base_cells = 16;
  int refinement_limit = 9;
};

/// Volume of {|phi|^2 > e^{log_threshold}} in M_P. The open orbit carries the
/// density det A(rho); a chart carries 2^r L(t, rho) prod t_j on (t, rho).
IntegralResult level_set_volume(const Eigenfunction& e, double log_threshold, const DistributionOptions& opts = {});

/// D_gamma(t) = Vol{|phi_gamma|^2 > t}.
double distribution_exact(const Eigenfunction& e, double t, const DistributionOptions& opts = {});

/// (N/2pi)^{d/2} D((N/2pi)^{d/2} t) with d = m + r.
double rescaled_distribution(const Eigenfunction& e, double t, const DistributionOptions& opts = {});

/// (log(c/t))^{d/2} / (c Gamma(d/2 + 1)) on (0, c], zero above c.
double rescaled_limit(double c, int d, double t);

/// (1 / (c Gamma(h/2))) (log(c/x))^{h/2 - 1} on (0, c), zero elsewhere.
double limit_density(double c, int h, double x);
/// k-th moment of limit_density by quadrature (substitution x = c e^{-v^2}).
double limit_density_moment(double c, int h, int k);
/// c^k / (k+1)^{h/2}.
double limit_density_moment_closed_form(double c, int h, int k);

struct MomentCheck {
  double empirical = 0;  ///< (N/2pi)^{-d(k-1)/2} ||phi||_{2k}^{2k}
  double limit = 0;      ///< c^{k-1} / k^{d/2}
  double ratio = 0;
};
MomentCheck moment_check(const OrbitModel& o, const IntVec& gamma, long n, int k, const NormOptions& opts = {});

/// lim D(e^{-N t}): volume of {b_x < t} with density det A.
double exp_rescaled_limit(const OrbitModel& o, const Vec& x, double t, const DistributionOptions& opts = {});
/// Same on a chart: {Psi < t} with density 2^r L prod t_j. alpha_tilde is the
/// face coordinate of the point (empty at a vertex).
double exp_rescaled_limit_chart(const ChartModel& c, const Vec& alpha_tilde, double t,
                                const DistributionOptions& opts = {});
/// Dispatches on the face of gamma / N.
double exp_rescaled_limit(const Eigenfunction& e, double t, const DistributionOptions& opts = {});
/// D(e^{-N t}) at finite N.
double exp_rescaled_distribution(const Eigenfunction& e, double t, const DistributionOptions& opts = {});

/// (pi d)^{d/2} / (c Gamma(d/2 + 1)) (log N / N)^{d/2}.
double unrescaled_asymptotic(double c, int d, double n);

/// n points geometrically spaced on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int n);

enum class Scaling { none, power, exponential };
std::string to_string(Scaling s);

struct DistributionSample {
  double t = 0;
  double value = 0;
  double limit_value = 0;
};

struct DistributionCurve {
  Scaling scaling = Scaling::none;
  long N = 0;
  IntVec gamma;
  int d = 0;
  double c = 0;
  std::vector<DistributionSample> samples;
};

/// Samples one scaling on the given t values with its limit overlay
/// (none: the t-independent unrescaled law).
DistributionCurve distribution_curve(const Eigenfunction& e, Scaling s, const std::vector<double>& ts,
                                     const DistributionOptions& opts = {});

/// Columns scaling,N,t,value,limit_value after a '#' line describing the scaling.
void write_csv(std::ostream& out, const std::vector<DistributionCurve>& curves);

}  // namespace toricdist
