#include "doctest.h"

#include <cmath>
#include <numbers>

#include "toricdist/projective.hpp"

using namespace toricdist;

TEST_SUITE("projective") {
  TEST_CASE("homogenized index") {
    Vec a(2);
    a << 0, 3;
    const auto h = homogenize(7, a);
    CHECK(h.alpha_hat == std::vector<double>{4, 0, 3});
    CHECK(h.r == 1);
    CHECK(h.d == 3);
    CHECK(h.J.size() == 2);
  }

  TEST_CASE("multinomial weights") {
    const auto w = binomial_weights(4, 1);
    CHECK(w.values() == std::vector<double>{1, 4, 6, 4, 1});
    const auto w2 = binomial_weights(2, 2);  // points (0,0) (0,1) (0,2) (1,0) (1,1) (2,0)
    CHECK(w2.values() == std::vector<double>{1, 2, 1, 2, 2, 1});
  }

  TEST_CASE("norm closed form on CP1") {
    // p = 1: gamma! (N - gamma)! / (N + 1)!
    CHECK(std::exp(log_norm_sq_closed_form(1, 2, IntVec{1})) == doctest::Approx(1.0 / 6.0));
    CHECK(std::exp(log_norm_sq_closed_form(1, 3, IntVec{0})) == doctest::Approx(1.0 / 4.0));
  }

  TEST_CASE("lq norms reduce to the normalization at q = 2") {
    for (std::int64_t n : {1, 3, 8})
      CHECK(lq_norm_exact(2, n, IntVec{n, 1}, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::log(lq_norm_exact(1, 6, IntVec{3}, 4)) == doctest::Approx(log_lq_norm_exact(1, 6, IntVec{3}, 4)));
  }

  TEST_CASE("stirling prediction is the large-N limit") {
    const IntVec alpha{2, 3};
    double prev = INFINITY;
    for (std::int64_t n : {16, 64, 256}) {
      IntVec g{alpha[0] * n, alpha[1] * n};
      const double exact = lq_norm_exact(7, n, g, 4);
      const auto st = stirling_asymptotics(7, alpha, 4, n);
      const double dev = std::abs(exact / st.norm_q_q - 1);
      CHECK(dev < prev);
      prev = dev;
      const double sdev = std::abs(sup_norm_exact(7, n, alpha) / st.sup_sq - 1);
      CHECK(sdev < 10.0 / static_cast<double>(n));
    }
    CHECK(prev < 0.01);
  }

  TEST_CASE("det A and the constant of 7 Sigma") {
    Vec a(2);
    a << 2, 3;
    CHECK(detA_closed_form(7, a) == doctest::Approx(12.0 / 7.0));
    CHECK(1 / std::sqrt(detA_closed_form(7, a)) == doctest::Approx(std::sqrt(7.0 / 12.0)));
  }

  TEST_CASE("b vanishes at the peak") {
    Vec a(2);
    a << 2, 3;
    const Vec rho = peak_rho_closed_form(7, a);
    CHECK(std::exp(rho[0]) == doctest::Approx(1.0));
    CHECK(std::exp(rho[1]) == doctest::Approx(1.5));
    CHECK(std::abs(b_closed_form(7, a, rho)) < 1e-12);
  }

  TEST_CASE("gaussian profile at its center") {
    Vec a(1);
    a << 0.5;
    // m = 1, p = 1: (N / 2pi)^{1/2} / sqrt(1/4).
    CHECK(gaussian_profile(1, a, 10, Vec::Zero(1)) == doctest::Approx(2 * std::sqrt(10 / (2 * std::numbers::pi))));
  }
}
