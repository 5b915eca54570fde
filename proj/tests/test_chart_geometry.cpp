#include "doctest.h"

#include <cmath>
#include <numbers>

#include "toricdist/chart_geometry.hpp"
#include "toricdist/projective.hpp"

using namespace toricdist;

namespace {

ChartModel face_chart(const Polytope& p, const WeightSet& w, const IntVec& alpha) {
  const auto face = face_of(p, alpha);
  return {build_vertex_chart(p, face, default_chart_vertex(p, face)), w};
}

}  // namespace

TEST_SUITE("chart_geometry") {
  TEST_CASE("chart weights follow the lattice points") {
    const auto p = standard_simplex(2, 2);
    const auto w = binomial_weights(2, 2);
    const auto c = face_chart(p, w, IntVec{0, 1});
    const auto cw = chart_weights(c.chart(), w);
    REQUIRE(cw.size() == p.lattice_points().size());
    for (std::size_t i = 0; i < cw.size(); ++i) CHECK(cw[i].second == w[i]);
  }

  TEST_CASE("orbit and chart coordinates agree") {
    const auto p = standard_simplex(2, 7);
    const auto w = binomial_weights(7, 2);
    const OrbitModel o(p, w);
    const auto c = face_chart(p, w, IntVec{0, 3});
    Vec rho(2);
    rho << 0.3, -0.8;
    const auto pt = c.from_orbit(rho);
    CHECK((c.to_orbit(pt) - rho).norm() < 1e-12);
    CHECK((c.moment_in_P(pt) - moment_map(o, rho)).norm() < 1e-10);
    // Density 2^r L prod t on (t, rho) equals det A d rho_full with rho = 2 log t.
    double t2 = 1;
    for (int k = 0; k < c.split_r(); ++k) t2 *= pt.t[k] * pt.t[k];
    CHECK(c.L_density(pt) * t2 == doctest::Approx(volume_density(o, rho)).epsilon(1e-9));
  }

  TEST_CASE("determinant identities at a facet peak") {
    const auto p = standard_simplex(2, 7);
    const auto w = binomial_weights(7, 2);
    const auto c = face_chart(p, w, IntVec{0, 3});
    const auto pk = chart_peak(c, IntVec{0, 3});
    CHECK(pk.det_Hs_residual < 1e-10);
    CHECK(pk.L0_residual < 1e-10);
    CHECK(pk.cPalpha == doctest::Approx(2 * std::numbers::pi / std::sqrt(pk.A_F.determinant())));
    const Mat H = block_hessian(pk.f_k, pk.kF_at_peak, pk.A_F);
    CHECK(H.rows() == 2 * c.split_r() + c.face_dim());
  }

  TEST_CASE("face character inverts its moment") {
    const auto p = cube(2, 3);
    const auto w = WeightSet::unit(p);
    const auto c = face_chart(p, w, IntVec{0, 1});
    Vec at(1);
    at << 1.7;
    const Vec rho = invert_face_moment(c, at);
    CHECK(face_character_and_moment(c, rho).mu_F[0] == doctest::Approx(1.7));
  }

  TEST_CASE("vertex peak constant") {
    const auto p = standard_simplex(2, 1);
    const auto w = WeightSet::unit(p);
    const auto c = face_chart(p, w, IntVec{0, 0});
    const auto vp = vertex_peak(c, IntVec{0, 0});
    CHECK(vp.cPalpha == doctest::Approx(std::pow(2 * std::numbers::pi, 2)));
    CHECK(vp.K0 == doctest::Approx(1.0));
    CHECK_THROWS(vertex_peak(c, IntVec{1, 0}));
  }
}
