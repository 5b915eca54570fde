#include "doctest.h"

#include <cmath>

#include "toricdist/error.hpp"
#include "toricdist/orbit_geometry.hpp"
#include "toricdist/projective.hpp"

using namespace toricdist;

TEST_SUITE("orbit_geometry") {
  TEST_CASE("CP1 moment map and hessian") {
    const auto p = standard_simplex(1, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    for (double r : {-4.0, -0.5, 0.0, 1.3, 6.0}) {
      Vec rho(1);
      rho << r;
      const double q = 1 / (1 + std::exp(-r));
      CHECK(character_k(o, rho) == doctest::Approx(std::log1p(std::exp(r))));
      CHECK(moment_map(o, rho)[0] == doctest::Approx(q));
      CHECK(hessian_A(o, rho)(0, 0) == doctest::Approx(q * (1 - q)));
      CHECK(volume_density(o, rho) == doctest::Approx(q * (1 - q)));
    }
  }

  TEST_CASE("moment inversion round trip") {
    const auto p = standard_simplex(2, 7);
    const OrbitModel o(p, binomial_weights(7, 2));
    for (double a : {0.1, 2.0, 3.5})
      for (double b : {0.05, 1.0, 3.0}) {
        Vec x(2);
        x << a, b;
        const Vec rho = invert_moment_map(o, x);
        CHECK((moment_map(o, rho) - x).norm() < 1e-10);
        CHECK((rho - peak_rho_closed_form(7, x)).norm() < 1e-9);
      }
  }

  TEST_CASE("boundary points are not interior") {
    const auto p = standard_simplex(2, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    Vec x(2);
    x << 0.0, 0.5;
    CHECK_THROWS_AS(invert_moment_map(o, x), PointNotInterior);
  }

  TEST_CASE("peak data against closed forms on 7 Sigma") {
    const auto p = standard_simplex(2, 7);
    const OrbitModel o(p, binomial_weights(7, 2));
    Vec x(2);
    x << 2, 3;
    const auto pk = peak_data(o, x);
    CHECK(pk.detA == doctest::Approx(12.0 / 7.0));
    CHECK(pk.cPx == doctest::Approx(std::sqrt(7.0 / 12.0)));
    CHECK(b_function(o, pk, pk.rho_x) == doctest::Approx(0.0).epsilon(1e-12));
    Vec rho(2);
    rho << 0.4, -1.2;
    CHECK(b_function(o, pk, rho) == doctest::Approx(b_closed_form(7, x, rho)));
    CHECK(b_function(o, pk, rho) > 0);
  }

  TEST_CASE("tail bound and truncation radius are positive") {
    const auto p = standard_simplex(2, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    Vec x(2);
    x << 0.3, 0.3;
    const auto tb = tail_bound(o, {x});
    CHECK(tb.M > 0);
    CHECK(tb.M <= 0.3 + 1e-12);
    CHECK(tb.c0 == doctest::Approx(1.0));
    const auto pk = peak_data(o, x);
    const double r10 = truncation_radius(o, pk, 10, 1e-10);
    const double r100 = truncation_radius(o, pk, 100, 1e-10);
    CHECK(r10 > 0);
    CHECK(r100 <= r10);
    Vec edge(2);
    edge << 0.0, 0.3;
    CHECK_THROWS_AS(tail_bound(o, {edge}), MarginTooSmall);
  }

  TEST_CASE("sphere directions are unit vectors") {
    CHECK(sphere_directions(1).size() == 2);
    CHECK(sphere_directions(2).size() == 360);
    for (const auto& d : sphere_directions(3)) CHECK(d.norm() == doctest::Approx(1.0));
  }
}
