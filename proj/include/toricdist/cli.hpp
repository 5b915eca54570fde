#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "toricdist/norms.hpp"

namespace toricdist {

/// Parsed command line.
struct RunConfig {
  std::string polytope_path;
  std::string weights = "unit";  ///< unit | binomial:p | file:FILE
  std::string command = "validate";
  std::vector<long> N{1};
  std::optional<IntVec> alpha;
  std::optional<Vec> x;
  std::vector<int> k{1, 2, 3};
  std::string tgrid = "geom:0.02:1:40";
  double tol = 1e-10;
  double region_tol = 1e-3;
  std::string out;
  int workers = 1;
  Route route = Route::automatic;
  std::vector<int> criteria;
};

/// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;

/// unit, binomial:p (multinomial p! / beta_hat!) or file:FILE holding
/// {"weights": [{"point": [...], "value": w}, ...]}.
WeightSet parse_weights(const std::string& spec, const Polytope& p);

/// KIND:LO:HI:COUNT with KIND geom or lin, or a comma separated list.
std::vector<double> parse_tgrid(const std::string& spec);

/// Command implementations; each writes to `out` and returns an exit code.
int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_peak(const RunConfig& cfg, std::ostream& out);
int cmd_norms(const RunConfig& cfg, std::ostream& out);
int cmd_pointwise(const RunConfig& cfg, std::ostream& out);
int cmd_dist(const RunConfig& cfg, std::ostream& out);
int cmd_report(const RunConfig& cfg, std::ostream& out);

/// Parses argv, dispatches, maps errors to exit codes.
int run_cli(int argc, char** argv);

}  // namespace toricdist
