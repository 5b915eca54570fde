#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toricdist/types.hpp"

namespace toricdist {

/// Half-space {x : <normal, x> >= offset}.
struct Facet {
  IntVec normal;
  std::int64_t offset = 0;
};

/// Integral polytope given by both its facet inequalities and its vertices.
///
/// Construction validates that the two descriptions are consistent (every
/// vertex satisfies all inequalities with equality on exactly `dim` of them,
/// the vertices span R^dim) and enumerates the lattice points in
/// lexicographic order. Delzant smoothness is checked separately by
/// validate_delzant().
class Polytope {
 public:
  Polytope(int dim, std::vector<Facet> facets, std::vector<IntVec> vertices);

  int dim() const noexcept { return dim_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  const std::vector<IntVec>& vertices() const noexcept { return vertices_; }
  const std::vector<IntVec>& lattice_points() const noexcept { return lattice_points_; }

  /// Lattice points as the columns of a dim x n real matrix.
  const Mat& lattice_matrix() const noexcept { return lattice_matrix_; }

  std::optional<std::size_t> index_of(const IntVec& point) const;
  bool contains(const IntVec& point) const;
  bool contains(const Vec& x, double slack = 0.0) const;
  /// All facet inequalities hold with margin > `margin`.
  bool strictly_contains(const Vec& x, double margin = 0.0) const;
  bool is_vertex(const IntVec& point) const;

  /// Indices of the facets active (equality) at `point` scaled by `scale`,
  /// i.e. {i : <u_i, point> = scale * lambda_i}.
  std::vector<std::size_t> active_facets(const IntVec& point, std::int64_t scale = 1) const;

  /// Euclidean volume, by the Lawrence formula over simple vertex cones.
  double volume() const;

 private:
  int dim_;
  std::vector<Facet> facets_;
  std::vector<IntVec> vertices_;
  std::vector<IntVec> lattice_points_;
  Mat lattice_matrix_;
};

/// Parses {"dim": m, "facets": [{"normal": [...], "offset": k}], "vertices": [[...]]}.
Polytope parse_polytope(const std::string& json_text);
Polytope load_polytope(const std::string& path);
std::string polytope_to_json(const Polytope& p);

/// All integer points of the vertex bounding box that satisfy every facet
/// inequality, lexicographically sorted.
std::vector<IntVec> enumerate_lattice_points(const Polytope& p);

Polytope dilate(const Polytope& p, std::int64_t n);

/// p * Sigma, the standard simplex {x >= 0, sum x <= p} in R^m.
Polytope standard_simplex(int m, std::int64_t p = 1);
/// [0, side]^m.
Polytope cube(int m, std::int64_t side = 1);

struct VertexEdges {
  IntVec vertex;
  std::vector<std::size_t> active_facets;  ///< facets through the vertex
  std::vector<IntVec> edges;                ///< edges[j] leaves facet active_facets[j]
  long long det = 0;
};

struct DelzantReport {
  std::vector<VertexEdges> vertices;
};

/// Primitive edge directions at a vertex. edges[j] lies on every active facet
/// except active_facets[j] and points into the polytope.
VertexEdges vertex_edges(const Polytope& p, const IntVec& vertex);

/// Checks the Delzant condition at every vertex; throws NotDelzant.
DelzantReport validate_delzant(const Polytope& p);

/// Relatively open face containing a point.
struct Face {
  std::vector<std::size_t> active_facets;
  int dim_face = 0;
  int codim = 0;
  bool is_interior() const noexcept { return codim == 0; }
};

/// Face of `scale * P` containing `point` (throws PointOutsidePolytope).
Face face_of(const Polytope& p, const IntVec& point, std::int64_t scale = 1);

struct CodimAndD {
  int r = 0;
  int d = 0;
};
/// r = codim of the face containing alpha, d = m + r.
CodimAndD codim_and_d(const Polytope& p, const IntVec& alpha, std::int64_t scale = 1);

/// Unimodular affine coordinates centered at a vertex v0.
///
/// gamma * edge_basis[j] = e_j, and Q_points[i] = gamma * (lattice_points[i] - v0)
/// (same order as Polytope::lattice_points). The first split_r coordinates
/// vanish on the chosen face.
struct VertexChart {
  IntVec v0;
  std::vector<IntVec> edge_basis;
  std::vector<std::vector<std::int64_t>> gamma;  ///< row-major m x m
  std::vector<IntVec> Q_points;
  int split_r = 0;
  std::vector<std::size_t> facet_order;  ///< facet i vanishes on chart coordinate j

  int dim() const noexcept { return static_cast<int>(v0.size()); }
  /// gamma * (beta - scale * v0).
  IntVec transform(const IntVec& beta, std::int64_t scale = 1) const;
  /// gamma as a real matrix.
  Mat gamma_matrix() const;
  /// edge basis as the columns of a real matrix (inverse of gamma).
  Mat edge_matrix() const;
};

VertexChart build_vertex_chart(const Polytope& p, const Face& face, const IntVec& v0);

/// Lexicographically smallest vertex of the closed face.
IntVec default_chart_vertex(const Polytope& p, const Face& face);

/// Exact integer determinant (Bareiss).
long long integer_determinant(std::vector<std::vector<std::int64_t>> a);

}  // namespace toricdist
