#pragma once

#include <string>
#include <vector>

#include "toricdist/orbit_geometry.hpp"

namespace toricdist {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Acceptance criteria 1..12 on fixed model problems (CP^1, p Sigma, the unit
/// square, 7 Sigma).
constexpr int kAcceptanceCount = 12;
CheckResult run_acceptance_check(int id);
std::vector<CheckResult> run_acceptance();

/// "PASS  3  name: detail (0.12 s)"
std::string format_line(const CheckResult& r);

/// Max over random rho of the central-difference errors of grad log k against
/// the moment map and of Hess log k against A.
struct DerivativeCheck {
  double gradient_error = 0;
  double hessian_error = 0;
  int points = 0;
};
DerivativeCheck derivative_check(const OrbitModel& o, int points, unsigned seed);

/// Number of random draws (of 'draws') at which A, or A_F on a facet chart,
/// failed a Cholesky factorization.
int positivity_failures(const OrbitModel& o, int draws, unsigned seed);

/// Checks on a user polytope: Delzant, pushforward volume, derivative
/// consistency and positivity.
std::vector<CheckResult> polytope_checks(const OrbitModel& o);

}  // namespace toricdist
