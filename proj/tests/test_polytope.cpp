#include "doctest.h"

#include "toricdist/error.hpp"
#include "toricdist/polytope.hpp"

using namespace toricdist;

TEST_SUITE("polytope") {
  TEST_CASE("lattice points of p Sigma") {
    for (int m = 1; m <= 3; ++m)
      for (int p = 1; p <= 5; ++p) {
        const auto poly = standard_simplex(m, p);
        // binomial(p + m, m)
        long expect = 1;
        for (int j = 1; j <= m; ++j) expect = expect * (p + j) / j;
        CHECK(static_cast<long>(poly.lattice_points().size()) == expect);
      }
    const auto s = standard_simplex(2, 1);
    const std::vector<IntVec> pts{{0, 0}, {0, 1}, {1, 0}};
    CHECK(s.lattice_points() == pts);
  }

  TEST_CASE("volume") {
    CHECK(standard_simplex(1, 3).volume() == doctest::Approx(3.0));
    CHECK(standard_simplex(2, 7).volume() == doctest::Approx(24.5));
    CHECK(standard_simplex(3, 2).volume() == doctest::Approx(8.0 / 6.0));
    CHECK(cube(2, 3).volume() == doctest::Approx(9.0));
    CHECK(cube(3, 1).volume() == doctest::Approx(1.0));
  }

  TEST_CASE("dilation") {
    const auto p = dilate(standard_simplex(2, 1), 4);
    CHECK(p.lattice_points().size() == 15);
    CHECK(p.contains(IntVec{4, 0}));
    CHECK_FALSE(p.contains(IntVec{4, 1}));
  }

  TEST_CASE("delzant polytopes pass") {
    CHECK_NOTHROW(validate_delzant(standard_simplex(2, 7)));
    CHECK_NOTHROW(validate_delzant(cube(3, 2)));
    const auto rep = validate_delzant(standard_simplex(3, 1));
    CHECK(rep.vertices.size() == 4);
    for (const auto& v : rep.vertices) CHECK(std::llabs(v.det) == 1);
  }

  TEST_CASE("non-smooth triangle is rejected at its bad vertex") {
    const std::string text = R"({"dim": 2,
      "facets": [{"normal": [1, 0], "offset": 0}, {"normal": [0, 1], "offset": 0},
                 {"normal": [-2, -1], "offset": -2}],
      "vertices": [[0, 0], [1, 0], [0, 2]]})";
    const auto p = parse_polytope(text);
    try {
      validate_delzant(p);
      FAIL("expected NotDelzant");
    } catch (const NotDelzant& ex) {
      CHECK(std::llabs(ex.det()) == 2);
      CHECK(ex.vertex().find('1') != std::string::npos);
    }
  }

  TEST_CASE("inconsistent descriptions are rejected") {
    const std::string text = R"({"dim": 1, "facets": [{"normal": [1], "offset": 0},
      {"normal": [-1], "offset": -1}], "vertices": [[0], [2]]})";
    CHECK_THROWS_AS(parse_polytope(text), ParseError);
  }

  TEST_CASE("json round trip") {
    const auto p = standard_simplex(2, 3);
    const auto q = parse_polytope(polytope_to_json(p));
    CHECK(q.lattice_points() == p.lattice_points());
    CHECK(q.volume() == doctest::Approx(p.volume()));
  }

  TEST_CASE("faces and codimension") {
    const auto p = standard_simplex(2, 1);
    CHECK(codim_and_d(p, IntVec{1, 1}, 3).r == 0);
    CHECK(codim_and_d(p, IntVec{0, 1}, 3).r == 1);
    CHECK(codim_and_d(p, IntVec{0, 1}, 3).d == 3);
    CHECK(codim_and_d(p, IntVec{0, 0}, 3).r == 2);
    CHECK(codim_and_d(p, IntVec{3, 0}, 3).r == 2);
    CHECK_THROWS_AS(face_of(p, IntVec{3, 1}, 3), PointOutsidePolytope);
  }

  TEST_CASE("vertex chart is unimodular and maps the face to the first coordinates") {
    const auto p = standard_simplex(2, 7);
    const auto face = face_of(p, IntVec{0, 3});
    const auto v0 = default_chart_vertex(p, face);
    const auto ch = build_vertex_chart(p, face, v0);
    CHECK(std::abs(ch.gamma_matrix().determinant()) == doctest::Approx(1.0));
    CHECK((ch.gamma_matrix() * ch.edge_matrix() - Mat::Identity(2, 2)).norm() < 1e-12);
    CHECK(ch.split_r == 1);
    const auto img = ch.transform(IntVec{0, 3});
    CHECK(img[0] == 0);
    for (const auto& q : ch.Q_points)
      for (auto c : q) CHECK(c >= 0);
  }

  TEST_CASE("integer determinant") {
    CHECK(integer_determinant({{2, 1}, {1, 1}}) == 1);
    CHECK(integer_determinant({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == -3);
  }
}
