#include "doctest.h"

#include <cmath>
#include <numbers>

#include "toricdist/error.hpp"
#include "toricdist/quadrature.hpp"

using namespace toricdist;

TEST_SUITE("quadrature") {
  TEST_CASE("gauss legendre integrates polynomials exactly") {
    const auto g = gauss_legendre(8);
    for (int k = 0; k <= 15; ++k) {
      double s = 0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(s - exact) < 1e-14);
    }
  }

  TEST_CASE("gaussian integrals in one to three dimensions") {
    for (int m = 1; m <= 3; ++m) {
      QuadratureSpec spec;
      spec.box = Box::around(Vec::Zero(m), Vec::Constant(m, 9.0));
      spec.rel_tol = 1e-10;
      const auto r = laplace_integral([](const Vec& v) { return -0.5 * v.squaredNorm(); }, spec);
      CHECK(r.converged);
      CHECK(r.value == doctest::Approx(std::pow(2 * std::numbers::pi, m / 2.0)).epsilon(1e-9));
      CHECK(r.log_value == doctest::Approx(m / 2.0 * std::log(2 * std::numbers::pi)));
    }
  }

  TEST_CASE("large exponents stay in the log domain") {
    QuadratureSpec spec;
    spec.box = Box::around(Vec::Zero(1), Vec::Constant(1, 1.0));
    const auto r = laplace_integral([](const Vec&) { return 2000.0; }, spec);
    CHECK(r.log_value == doctest::Approx(2000.0 + std::log(2.0)));
  }

  TEST_CASE("phase and weight form") {
    QuadratureSpec spec;
    spec.box = Box::around(Vec::Zero(1), Vec::Constant(1, 3.0));
    const auto r = laplace_integral([](const Vec& v) { return v[0] * v[0]; }, [](const Vec&) { return 0.0; }, 50.0, spec);
    CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi / 50.0)).epsilon(1e-10));
  }

  TEST_CASE("unreachable tolerance throws") {
    QuadratureSpec spec;
    spec.box = Box::around(Vec::Zero(1), Vec::Constant(1, 1.0));
    spec.refinement_limit = 1;
    spec.rel_tol = 1e-15;
    CHECK_THROWS_AS(laplace_integral([](const Vec& v) { return std::log(std::abs(v[0]) + 1e-9); }, spec),
                    NoConvergence);
  }

  TEST_CASE("region volume of a disk") {
    QuadratureSpec spec;
    spec.box = Box::around(Vec::Zero(2), Vec::Constant(2, 1.5));
    spec.rule = Rule::trapezoid;
    spec.rel_tol = 1e-3;
    spec.refinement_limit = 9;
    const auto r = region_volume([](const Vec& v) { return v.squaredNorm() < 1; }, [](const Vec&) { return 1.0; }, spec);
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::numbers::pi) < 2e-3 * std::numbers::pi);
    const auto w = region_volume([](const Vec& v) { return v.squaredNorm() < 1; },
                                 [](const Vec& v) { return v.squaredNorm(); }, spec);
    CHECK(std::abs(w.value - std::numbers::pi / 2) < 2e-3 * std::numbers::pi);
  }

  TEST_CASE("region touching a non-edge face throws") {
    QuadratureSpec spec;
    spec.box = Box::around(Vec::Zero(2), Vec::Constant(2, 0.5));
    spec.rule = Rule::trapezoid;
    CHECK_THROWS_AS(
        region_volume([](const Vec& v) { return v.squaredNorm() < 1; }, [](const Vec&) { return 1.0; }, spec),
        RegionTouchesBoundary);
    spec.lower_is_edge = {true, true};
    spec.upper_is_edge = {true, true};
    spec.rel_tol = 1e-6;
    const auto r = region_volume([](const Vec& v) { return v.squaredNorm() < 1; }, [](const Vec&) { return 1.0; }, spec);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("find_box reaches the requested drop") {
    const auto f = [](const Vec& v) { return -0.5 * (4 * v[0] * v[0] + 0.25 * v[1] * v[1]); };
    const Box limits = Box::around(Vec::Zero(2), Vec::Constant(2, 100.0));
    const auto tb = find_box(f, Vec::Zero(2), limits, 30, Vec::Constant(2, 1.0));
    CHECK(tb.peak_log == doctest::Approx(0.0));
    CHECK(tb.boundary_log_max <= -30 + 1e-9);
    // Drop of 30 along each axis: |x| = sqrt(60 / 4), |y| = sqrt(60 / 0.25).
    CHECK(tb.box.hi[0] >= std::sqrt(15.0) - 1e-9);
    CHECK(tb.box.hi[1] >= std::sqrt(240.0) - 1e-9);
    CHECK(tb.box.hi[0] < 3 * std::sqrt(15.0));
  }

  TEST_CASE("parallel fill does not depend on the worker count") {
    std::vector<double> a(1000), b(1000);
    const auto f = [](std::size_t i) { return std::sin(static_cast<double>(i)); };
    parallel_fill(a, f, 1);
    parallel_fill(b, f, 4);
    CHECK(a == b);
  }

  TEST_CASE("kahan summation") {
    KahanSum s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i) s.add(1e-16);
    CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
  }
}
