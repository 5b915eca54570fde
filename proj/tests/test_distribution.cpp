#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "toricdist/distribution.hpp"
#include "toricdist/projective.hpp"

using namespace toricdist;

namespace {

OrbitModel cp1() {
  const auto p = standard_simplex(1, 1);
  return {p, WeightSet::unit(p)};
}

}  // namespace

TEST_SUITE("distribution") {
  TEST_CASE("CP1 level sets against the exact interval") {
    // N = 2, gamma = 1: |phi|^2 = 6 q (1 - q) on [0, 1], D(t) = sqrt(1 - 2t/3).
    const Eigenfunction e(cp1(), IntVec{1}, 2);
    for (double t : {0.01, 0.5, 1.0, 1.4}) CHECK(distribution_exact(e, t) == doctest::Approx(std::sqrt(1 - 2 * t / 3)).epsilon(1e-7));
    CHECK(distribution_exact(e, 1.6) == 0.0);
  }

  TEST_CASE("vertex level sets on CP1 through the chart") {
    // N = 3, gamma = 0: |phi|^2 = 4 (1 - q)^3, D(t) = 1 - (t/4)^{1/3}.
    const Eigenfunction e(cp1(), IntVec{0}, 3);
    for (double t : {0.05, 1.0, 3.0})
      CHECK(distribution_exact(e, t) == doctest::Approx(1 - std::cbrt(t / 4)).epsilon(2e-3));
  }

  TEST_CASE("small thresholds recover the volume and D decreases") {
    const auto p = standard_simplex(2, 7);
    const OrbitModel o(p, binomial_weights(7, 2));
    const Eigenfunction e(o, IntVec{4, 6}, 2);
    // |phi|^2 vanishes to order 4 on two facets, so the missing volume goes like t^{1/4}.
    CHECK(distribution_exact(e, 1e-60) == doctest::Approx(p.volume()).epsilon(1e-4));
    double prev = INFINITY;
    for (double t : {1e-3, 5e-3, 1e-2, 2e-2, 4e-2}) {
      const double d = distribution_exact(e, t);
      CHECK(d < prev);
      prev = d;
    }
  }

  TEST_CASE("polar and cell-grid level sets agree") {
    const auto p = standard_simplex(2, 2);
    const OrbitModel o(p, binomial_weights(2, 2));
    NormOptions orbit, chart;
    orbit.route = Route::orbit;
    chart.route = Route::chart;
    const Eigenfunction a(o, IntVec{3, 2}, 3, orbit);
    const Eigenfunction b(o, IntVec{3, 2}, 3, chart);
    DistributionOptions opts;
    opts.region_rel_tol = 3e-3;
    const double va = distribution_exact(a, 1.0, opts);
    const double vb = distribution_exact(b, 1.0, opts);
    CHECK(va == doctest::Approx(vb).epsilon(1e-2));
  }

  TEST_CASE("rescaled limit values") {
    CHECK(rescaled_limit(0.5, 2, 0.5 / std::numbers::e) == doctest::Approx(2.0));
    CHECK(rescaled_limit(1.0, 1, 1 / std::numbers::e) == doctest::Approx(2 / std::sqrt(std::numbers::pi)));
    CHECK(rescaled_limit(1.0, 2, 1.2) == 0.0);
    CHECK(rescaled_limit(1.0, 2, 1.0) == 0.0);
  }

  TEST_CASE("limit density and its moments") {
    for (int h = 1; h <= 4; ++h)
      for (int k = 0; k <= 4; ++k)
        CHECK(limit_density_moment(0.8, h, k) == doctest::Approx(limit_density_moment_closed_form(0.8, h, k)).epsilon(1e-9));
    CHECK(limit_density(1.0, 2, 0.3) == doctest::Approx(1.0));
    CHECK(limit_density(1.0, 2, 1.3) == 0.0);
  }

  TEST_CASE("exponential limit on CP1") {
    // b_{1/2}(rho) = log(1 + e^rho) - rho / 2 - log 2; {b < t} in q is an interval.
    Vec x(1);
    x << 0.5;
    const double t = 0.1;
    // q(1-q) > e^{-2t} / 4.
    const double s = std::exp(-2 * t);
    const double exact = std::sqrt(1 - s);
    CHECK(exp_rescaled_limit(cp1(), x, t) == doctest::Approx(exact).epsilon(1e-7));
  }

  TEST_CASE("geometric grid") {
    const auto g = geometric_grid(0.1, 10, 3);
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(1.0));
    CHECK(g[2] == doctest::Approx(10.0));
  }

  TEST_CASE("unrescaled law") {
    // d = 2: 2 pi / c * log N / N.
    CHECK(unrescaled_asymptotic(1.0, 2, 100) == doctest::Approx(2 * std::numbers::pi * std::log(100.0) / 100));
  }

  TEST_CASE("csv output") {
    const Eigenfunction e(cp1(), IntVec{1}, 2);
    const auto curve = distribution_curve(e, Scaling::none, {0.5, 1.0});
    std::ostringstream os;
    write_csv(os, {curve});
    const auto text = os.str();
    CHECK(text.rfind('#', 0) == 0);
    CHECK(text.find("scaling,N,t,value,limit_value\n") != std::string::npos);
    CHECK(text.find("none,2,") != std::string::npos);
  }

  TEST_CASE("moment check at moderate N") {
    const auto mc = moment_check(cp1(), IntVec{32}, 64, 2);
    CHECK(mc.ratio == doctest::Approx(1.0).epsilon(0.05));
  }
}
