#include "doctest.h"

#include <cmath>

#include "toricdist/norms.hpp"
#include "toricdist/projective.hpp"

using namespace toricdist;

TEST_SUITE("norms") {
  TEST_CASE("CP1 norms are beta functions") {
    const auto p = standard_simplex(1, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    for (long n : {1L, 4L, 9L})
      for (std::int64_t g = 0; g <= n; ++g) {
        // Integral of q^g (1 - q)^(N - g) dq.
        const double exact = std::lgamma(g + 1.0) + std::lgamma(n - g + 1.0) - std::lgamma(n + 2.0);
        const auto r = norm_sq_exact(o, IntVec{g}, n);
        CHECK(r.log_value == doctest::Approx(exact).epsilon(1e-10));
      }
  }

  TEST_CASE("orbit and chart routes agree for interior points") {
    const auto p = standard_simplex(2, 2);
    const OrbitModel o(p, binomial_weights(2, 2));
    NormOptions orbit, chart;
    orbit.route = Route::orbit;
    chart.route = Route::chart;
    const IntVec g{2, 3};
    const auto a = norm_sq_exact(o, g, 4, orbit);
    const auto b = norm_sq_exact(o, g, 4, chart);
    CHECK(a.log_value == doctest::Approx(b.log_value).epsilon(1e-9));
    CHECK(a.log_value == doctest::Approx(log_norm_sq_closed_form(2, 4, g)).epsilon(1e-9));
  }

  TEST_CASE("boundary gamma through the chart") {
    const auto p = standard_simplex(2, 3);
    const OrbitModel o(p, binomial_weights(3, 2));
    for (const IntVec& g : {IntVec{0, 2}, IntVec{0, 0}, IntVec{4, 2}, IntVec{6, 0}}) {
      const Eigenfunction e(o, g, 2);
      CHECK(e.route() == Route::chart);
      CHECK(e.log_norm_sq() == doctest::Approx(log_norm_sq_closed_form(3, 2, g)).epsilon(1e-9));
    }
  }

  TEST_CASE("L4 norm against the closed form") {
    const auto p = standard_simplex(1, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    const auto rep = l2k_norm(o, IntVec{3}, 6, 2);
    CHECK(rep.exact == doctest::Approx(lq_norm_exact(1, 6, IntVec{3}, 4)).epsilon(1e-9));
    CHECK(rep.asymptotic > 0);
  }

  TEST_CASE("pushforward of the volume form is vol(P)") {
    for (int m = 1; m <= 2; ++m) {
      const auto p = standard_simplex(m, 3);
      const OrbitModel o(p, WeightSet::unit(p));
      CHECK(pushforward_volume(o).value == doctest::Approx(p.volume()).epsilon(1e-8));
    }
    const auto sq = cube(2, 1);
    CHECK(pushforward_volume(OrbitModel(sq, WeightSet::unit(sq))).value == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("sup norm against the closed form") {
    const auto p = standard_simplex(2, 2);
    const OrbitModel o(p, binomial_weights(2, 2));
    const auto s = sup_norm(o, IntVec{5, 5}, 5);
    CHECK(s.value == doctest::Approx(sup_norm_exact(2, 5, IntVec{1, 1})).epsilon(1e-6));
  }

  TEST_CASE("localization of a linear function is exact") {
    const auto p = standard_simplex(1, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    Polynomial one{{{1.0, IntVec{0}}}};
    CHECK(localization_integral(o, IntVec{2}, 5, one).value == doctest::Approx(1.0).epsilon(1e-9));
    // E[q] for density q^2 (1 - q)^3 / B(3, 4) is 3 / 7.
    Polynomial lin{{{1.0, IntVec{1}}}};
    const auto rep = localization_integral(o, IntVec{2}, 5, lin);
    CHECK(rep.value == doctest::Approx(3.0 / 7.0).epsilon(1e-9));
    CHECK(rep.target == doctest::Approx(0.4));
  }

  TEST_CASE("pointwise asymptotic matches the gaussian profile") {
    const auto p = standard_simplex(2, 7);
    const OrbitModel o(p, binomial_weights(7, 2));
    Vec x(2);
    x << 2, 3;
    const auto pk = peak_data(o, x);
    const long n = 400;
    Vec u(2);
    u << 0.3, -0.2;
    const Vec rho = pk.rho_x + u / std::sqrt(static_cast<double>(n));
    const double a = pointwise_asymptotic(o, pk, n, rho);
    CHECK(std::log(a) == doctest::Approx(log_pointwise_asymptotic(o, pk, n, rho)));
    CHECK(a == doctest::Approx(gaussian_profile(7, x, n, u)).epsilon(0.05));
  }

  TEST_CASE("peak kinds") {
    const auto p = standard_simplex(2, 1);
    const OrbitModel o(p, WeightSet::unit(p));
    CHECK(peak_info(Eigenfunction(o, IntVec{1, 1}, 3)).kind == PeakKind::interior);
    CHECK(peak_info(Eigenfunction(o, IntVec{0, 1}, 3)).kind == PeakKind::face);
    const auto v = peak_info(Eigenfunction(o, IntVec{0, 0}, 3));
    CHECK(v.kind == PeakKind::vertex);
    CHECK(v.r == 2);
  }
}
