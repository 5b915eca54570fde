#include "doctest.h"

#include <cmath>
#include <random>

#include "toricdist/exponential_sum.hpp"

using namespace toricdist;

namespace {

ExponentialSum square_sum() {
  Mat pts(2, 4);
  pts << 0, 1, 0, 1, 0, 0, 1, 1;
  Vec lw(4);
  lw << 0.0, std::log(2.0), std::log(0.5), std::log(3.0);
  return {pts, lw};
}

}  // namespace

TEST_SUITE("exponential_sum") {
  TEST_CASE("log_sum_exp") {
    Vec v(3);
    v << 1000, 1000, -INFINITY;
    CHECK(log_sum_exp(v) == doctest::Approx(1000 + std::log(2.0)));
    Vec w(2);
    w << std::log(2.0), std::log(3.0);
    CHECK(log_sum_exp(w) == doctest::Approx(std::log(5.0)));
  }

  TEST_CASE("derivatives match central differences") {
    const auto s = square_sum();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
      Vec rho(2);
      rho << u(rng), u(rng);
      const auto d = s.derivatives(rho);
      CHECK(d.log_value == doctest::Approx(s.log_value(rho)));
      for (int i = 0; i < 2; ++i) {
        Vec e = Vec::Zero(2);
        e[i] = h;
        const double g = (s.log_value(rho + e) - s.log_value(rho - e)) / (2 * h);
        CHECK(std::abs(g - d.mean[i]) < 1e-8);
        const Vec gp = s.derivatives(rho + e).mean;
        const Vec gm = s.derivatives(rho - e).mean;
        const Vec col = (gp - gm) / (2 * h);
        CHECK((col - d.cov.col(i)).norm() < 1e-7);
      }
    }
  }

  TEST_CASE("one-dimensional closed form") {
    Mat pts(1, 2);
    pts << 0, 1;
    const ExponentialSum s(pts, Vec::Zero(2));
    Vec rho(1);
    rho << 0.7;
    const auto d = s.derivatives(rho);
    const double q = 1 / (1 + std::exp(-0.7));
    CHECK(d.mean[0] == doctest::Approx(q));
    CHECK(d.cov(0, 0) == doctest::Approx(q * (1 - q)));
  }

  TEST_CASE("solve_mean inverts the gradient") {
    const auto s = square_sum();
    for (double a : {0.01, 0.3, 0.5, 0.97})
      for (double b : {0.02, 0.5, 0.9}) {
        Vec target(2);
        target << a, b;
        const Vec rho = s.solve_mean(target);
        CHECK((s.derivatives(rho).mean - target).norm() < 1e-10);
      }
  }

  TEST_CASE("large arguments do not overflow") {
    const auto s = square_sum();
    Vec rho(2);
    rho << 800, 700;
    const auto d = s.derivatives(rho);
    CHECK(std::isfinite(d.log_value));
    CHECK(d.mean[0] == doctest::Approx(1.0));
    CHECK(d.mean[1] == doctest::Approx(1.0));
  }
}
