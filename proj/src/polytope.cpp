#include "toricdist/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "toricdist/error.hpp"

namespace toricdist {

namespace {

std::int64_t dot(const IntVec& a, const IntVec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::int64_t gcd_all(const IntVec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

int matrix_rank(Mat m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-9);
  return static_cast<int>(lu.rank());
}

}  // namespace

long long integer_determinant(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  long long sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

Polytope::Polytope(int dim, std::vector<Facet> facets, std::vector<IntVec> vertices)
    : dim_(dim), facets_(std::move(facets)), vertices_(std::move(vertices)) {
  if (dim_ < 1) throw ParseError("polytope dimension must be positive");
  if (facets_.size() < static_cast<std::size_t>(dim_) + 1) {
    throw ParseError("a bounded polytope in R^" + std::to_string(dim_) + " needs at least " +
                     std::to_string(dim_ + 1) + " facets");
  }
  for (const auto& f : facets_) {
    if (f.normal.size() != static_cast<std::size_t>(dim_)) throw ParseError("facet normal has wrong dimension");
    if (gcd_all(f.normal) == 0) throw ParseError("facet normal is zero");
  }
  if (vertices_.size() < static_cast<std::size_t>(dim_) + 1) throw ParseError("too few vertices: empty interior");
  for (const auto& v : vertices_) {
    if (v.size() != static_cast<std::size_t>(dim_)) throw ParseError("vertex has wrong dimension");
    std::size_t equalities = 0;
    for (const auto& f : facets_) {
      const auto s = dot(f.normal, v);
      if (s < f.offset) throw ParseError("vertex " + to_string(v) + " violates a facet inequality");
      if (s == f.offset) ++equalities;
    }
    if (equalities < static_cast<std::size_t>(dim_)) {
      throw ParseError("vertex " + to_string(v) + " lies on fewer than " + std::to_string(dim_) + " facets");
    }
  }
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    std::size_t on = 0;
    for (const auto& v : vertices_) on += dot(facets_[i].normal, v) == facets_[i].offset;
    if (on < static_cast<std::size_t>(dim_)) {
      throw ParseError("facet " + std::to_string(i) + " contains fewer than dim vertices");
    }
  }
  Mat diffs(dim_, static_cast<Eigen::Index>(vertices_.size() - 1));
  for (std::size_t j = 1; j < vertices_.size(); ++j) diffs.col(static_cast<Eigen::Index>(j - 1)) = to_real(vertices_[j]) - to_real(vertices_[0]);
  if (matrix_rank(diffs) < dim_) throw ParseError("vertices do not span R^" + std::to_string(dim_) + ": empty interior");

  lattice_points_ = enumerate_lattice_points(*this);
  lattice_matrix_.resize(dim_, static_cast<Eigen::Index>(lattice_points_.size()));
  for (std::size_t j = 0; j < lattice_points_.size(); ++j) lattice_matrix_.col(static_cast<Eigen::Index>(j)) = to_real(lattice_points_[j]);
}

std::optional<std::size_t> Polytope::index_of(const IntVec& point) const {
  auto it = std::lower_bound(lattice_points_.begin(), lattice_points_.end(), point);
  if (it == lattice_points_.end() || *it != point) return std::nullopt;
  return static_cast<std::size_t>(it - lattice_points_.begin());
}

bool Polytope::contains(const IntVec& point) const {
  if (point.size() != static_cast<std::size_t>(dim_)) return false;
  return std::all_of(facets_.begin(), facets_.end(), [&](const Facet& f) { return dot(f.normal, point) >= f.offset; });
}

bool Polytope::contains(const Vec& x, double slack) const {
  for (const auto& f : facets_) {
    if (to_real(f.normal).dot(x) < static_cast<double>(f.offset) - slack) return false;
  }
  return true;
}

bool Polytope::strictly_contains(const Vec& x, double margin) const {
  for (const auto& f : facets_) {
    if (!(to_real(f.normal).dot(x) - static_cast<double>(f.offset) > margin)) return false;
  }
  return true;
}

bool Polytope::is_vertex(const IntVec& point) const {
  return std::find(vertices_.begin(), vertices_.end(), point) != vertices_.end();
}

std::vector<std::size_t> Polytope::active_facets(const IntVec& point, std::int64_t scale) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (dot(facets_[i].normal, point) == scale * facets_[i].offset) out.push_back(i);
  }
  return out;
}

double Polytope::volume() const {
  // Generic direction; irrational ratios keep <xi, w> away from zero.
  std::vector<long double> xi(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) xi[static_cast<std::size_t>(i)] = std::sqrt(static_cast<long double>(2 + 3 * i)) + 0.1L * i;
  auto pair = [&](const IntVec& v) {
    long double s = 0;
    for (int i = 0; i < dim_; ++i) s += xi[static_cast<std::size_t>(i)] * static_cast<long double>(v[static_cast<std::size_t>(i)]);
    return s;
  };
  long double total = 0;
  for (const auto& v : vertices_) {
    const auto ve = vertex_edges(*this, v);
    long double term = std::pow(pair(v), dim_) * std::fabs(static_cast<long double>(ve.det));
    for (const auto& e : ve.edges) term /= pair(e);
    total += term;
  }
  long double fact = 1;
  for (int i = 2; i <= dim_; ++i) fact *= i;
  return static_cast<double>((dim_ % 2 == 0 ? 1 : -1) * total / fact);
}

std::vector<IntVec> enumerate_lattice_points(const Polytope& p) {
  const auto m = static_cast<std::size_t>(p.dim());
  IntVec lo(m), hi(m);
  for (std::size_t i = 0; i < m; ++i) {
    lo[i] = hi[i] = p.vertices().front()[i];
    for (const auto& v : p.vertices()) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }
  std::vector<IntVec> out;
  IntVec cur = lo;
  // Odometer with the last coordinate fastest yields lexicographic order.
  while (true) {
    if (p.contains(cur)) out.push_back(cur);
    std::size_t k = m;
    while (k > 0) {
      --k;
      if (cur[k] < hi[k]) {
        ++cur[k];
        break;
      }
      cur[k] = lo[k];
      if (k == 0) return out;
    }
  }
}

Polytope dilate(const Polytope& p, std::int64_t n) {
  if (n < 1) throw DomainError("dilation factor must be >= 1");
  auto facets = p.facets();
  for (auto& f : facets) f.offset *= n;
  auto verts = p.vertices();
  for (auto& v : verts)
    for (auto& x : v) x *= n;
  return Polytope(p.dim(), std::move(facets), std::move(verts));
}

Polytope standard_simplex(int m, std::int64_t p) {
  std::vector<Facet> facets;
  for (int i = 0; i < m; ++i) {
    IntVec n(static_cast<std::size_t>(m), 0);
    n[static_cast<std::size_t>(i)] = 1;
    facets.push_back({n, 0});
  }
  facets.push_back({IntVec(static_cast<std::size_t>(m), -1), -p});
  std::vector<IntVec> verts{IntVec(static_cast<std::size_t>(m), 0)};
  for (int i = 0; i < m; ++i) {
    IntVec v(static_cast<std::size_t>(m), 0);
    v[static_cast<std::size_t>(i)] = p;
    verts.push_back(v);
  }
  return Polytope(m, std::move(facets), std::move(verts));
}

Polytope cube(int m, std::int64_t side) {
  std::vector<Facet> facets;
  for (int i = 0; i < m; ++i) {
    IntVec n(static_cast<std::size_t>(m), 0);
    n[static_cast<std::size_t>(i)] = 1;
    facets.push_back({n, 0});
    n[static_cast<std::size_t>(i)] = -1;
    facets.push_back({n, -side});
  }
  std::vector<IntVec> verts;
  for (int mask = 0; mask < (1 << m); ++mask) {
    IntVec v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = (mask >> (m - 1 - i)) & 1 ? side : 0;
    verts.push_back(v);
  }
  return Polytope(m, std::move(facets), std::move(verts));
}

Polytope parse_polytope(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid polytope JSON: ") + e.what());
  }
  auto int_of = [](const nlohmann::json& x, const char* what) -> std::int64_t {
    if (!x.is_number_integer()) throw ParseError(std::string("non-integer entry in ") + what);
    return x.get<std::int64_t>();
  };
  auto vec_of = [&](const nlohmann::json& x, const char* what) {
    if (!x.is_array()) throw ParseError(std::string(what) + " must be an array");
    IntVec v;
    for (const auto& e : x) v.push_back(int_of(e, what));
    return v;
  };
  if (!j.is_object() || !j.contains("dim") || !j.contains("facets") || !j.contains("vertices")) {
    throw ParseError("polytope JSON needs dim, facets and vertices");
  }
  const auto dim = int_of(j["dim"], "dim");
  std::vector<Facet> facets;
  for (const auto& f : j["facets"]) {
    if (!f.contains("normal") || !f.contains("offset")) throw ParseError("facet needs normal and offset");
    facets.push_back({vec_of(f["normal"], "facet normal"), int_of(f["offset"], "facet offset")});
  }
  std::vector<IntVec> verts;
  for (const auto& v : j["vertices"]) verts.push_back(vec_of(v, "vertex"));
  return Polytope(static_cast<int>(dim), std::move(facets), std::move(verts));
}

Polytope load_polytope(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open polytope file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_polytope(ss.str());
}

std::string polytope_to_json(const Polytope& p) {
  nlohmann::json j;
  j["dim"] = p.dim();
  j["facets"] = nlohmann::json::array();
  for (const auto& f : p.facets()) j["facets"].push_back({{"normal", f.normal}, {"offset", f.offset}});
  j["vertices"] = p.vertices();
  return j.dump();
}

VertexEdges vertex_edges(const Polytope& p, const IntVec& vertex) {
  const auto m = static_cast<std::size_t>(p.dim());
  VertexEdges out;
  out.vertex = vertex;
  out.active_facets = p.active_facets(vertex);
  if (out.active_facets.size() != m) {
    throw NotDelzant(to_string(vertex), 0,
                     "vertex " + to_string(vertex) + " lies on " + std::to_string(out.active_facets.size()) +
                         " facets (expected " + std::to_string(m) + "): not simple");
  }
  for (std::size_t leave = 0; leave < m; ++leave) {
    // Generalized cross product of the remaining m-1 normals.
    std::vector<IntVec> rows;
    for (std::size_t k = 0; k < m; ++k)
      if (k != leave) rows.push_back(p.facets()[out.active_facets[k]].normal);
    IntVec d(m);
    for (std::size_t col = 0; col < m; ++col) {
      std::vector<std::vector<std::int64_t>> minor;
      for (const auto& r : rows) {
        std::vector<std::int64_t> row;
        for (std::size_t c = 0; c < m; ++c)
          if (c != col) row.push_back(r[c]);
        minor.push_back(row);
      }
      d[col] = ((col % 2) ? -1 : 1) * integer_determinant(minor);
    }
    const auto g = gcd_all(d);
    if (g == 0) throw NotDelzant(to_string(vertex), 0, "degenerate edge at vertex " + to_string(vertex));
    for (auto& x : d) x /= g;
    const auto s = dot(p.facets()[out.active_facets[leave]].normal, d);
    if (s == 0) throw NotDelzant(to_string(vertex), 0, "degenerate edge at vertex " + to_string(vertex));
    if (s < 0)
      for (auto& x : d) x = -x;
    out.edges.push_back(d);
  }
  std::vector<std::vector<std::int64_t>> w(m, std::vector<std::int64_t>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) w[i][j] = out.edges[j][i];
  out.det = integer_determinant(w);
  return out;
}

DelzantReport validate_delzant(const Polytope& p) {
  DelzantReport report;
  for (const auto& v : p.vertices()) {
    auto ve = vertex_edges(p, v);
    if (ve.det != 1 && ve.det != -1) {
      throw NotDelzant(to_string(v), ve.det,
                       "not Delzant at vertex " + to_string(v) + ": edge determinant " + std::to_string(ve.det));
    }
    report.vertices.push_back(std::move(ve));
  }
  return report;
}

Face face_of(const Polytope& p, const IntVec& point, std::int64_t scale) {
  if (point.size() != static_cast<std::size_t>(p.dim())) throw PointOutsidePolytope("point has wrong dimension");
  for (const auto& f : p.facets()) {
    if (dot(f.normal, point) < scale * f.offset) throw PointOutsidePolytope("point " + to_string(point) + " is outside the polytope");
  }
  Face face;
  face.active_facets = p.active_facets(point, scale);
  face.codim = static_cast<int>(face.active_facets.size());
  face.dim_face = p.dim() - face.codim;
  return face;
}

CodimAndD codim_and_d(const Polytope& p, const IntVec& alpha, std::int64_t scale) {
  const auto f = face_of(p, alpha, scale);
  return {f.codim, p.dim() + f.codim};
}

IntVec VertexChart::transform(const IntVec& beta, std::int64_t scale) const {
  const auto m = v0.size();
  IntVec out(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out[i] += gamma[i][j] * (beta[j] - scale * v0[j]);
  return out;
}

Mat VertexChart::gamma_matrix() const {
  const auto m = static_cast<Eigen::Index>(v0.size());
  Mat g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = static_cast<double>(gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return g;
}

Mat VertexChart::edge_matrix() const {
  const auto m = static_cast<Eigen::Index>(v0.size());
  Mat e(m, m);
  for (Eigen::Index j = 0; j < m; ++j) e.col(j) = to_real(edge_basis[static_cast<std::size_t>(j)]);
  return e;
}

VertexChart build_vertex_chart(const Polytope& p, const Face& face, const IntVec& v0) {
  if (!p.is_vertex(v0)) throw VertexNotOnFace(to_string(v0) + " is not a vertex");
  const auto ve = vertex_edges(p, v0);
  for (auto f : face.active_facets) {
    if (std::find(ve.active_facets.begin(), ve.active_facets.end(), f) == ve.active_facets.end()) {
      throw VertexNotOnFace("vertex " + to_string(v0) + " is not in the closure of the face");
    }
  }
  if (ve.det != 1 && ve.det != -1) {
    throw NotDelzant(to_string(v0), ve.det, "chart construction failed at " + to_string(v0) + ": input is not Delzant");
  }
  const auto m = static_cast<std::size_t>(p.dim());
  VertexChart chart;
  chart.v0 = v0;
  chart.split_r = face.codim;
  // Facets cutting out the face first, then the remaining facets through v0.
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < m; ++k)
    if (std::count(face.active_facets.begin(), face.active_facets.end(), ve.active_facets[k])) order.push_back(k);
  for (std::size_t k = 0; k < m; ++k)
    if (!std::count(face.active_facets.begin(), face.active_facets.end(), ve.active_facets[k])) order.push_back(k);
  for (auto k : order) {
    chart.edge_basis.push_back(ve.edges[k]);
    chart.facet_order.push_back(ve.active_facets[k]);
  }
  // gamma = inverse of the edge matrix (columns = edge_basis), exact via adjugate.
  std::vector<std::vector<std::int64_t>> e(m, std::vector<std::int64_t>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) e[i][j] = chart.edge_basis[j][i];
  const auto det = integer_determinant(e);
  chart.gamma.assign(m, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      // cofactor C_ji, adj(e)_ij = C_ji
      std::vector<std::vector<std::int64_t>> minor;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == j) continue;
        std::vector<std::int64_t> row;
        for (std::size_t c = 0; c < m; ++c)
          if (c != i) row.push_back(e[r][c]);
        minor.push_back(row);
      }
      const auto cof = (((i + j) % 2) ? -1 : 1) * integer_determinant(minor);
      chart.gamma[i][j] = cof / det;
    }
  }
  for (const auto& beta : p.lattice_points()) {
    auto q = chart.transform(beta);
    for (auto x : q) {
      if (x < 0) throw NotDelzant(to_string(v0), det, "chart image leaves the nonnegative orthant: input is not Delzant");
    }
    chart.Q_points.push_back(std::move(q));
  }
  return chart;
}

IntVec default_chart_vertex(const Polytope& p, const Face& face) {
  std::optional<IntVec> best;
  for (const auto& v : p.vertices()) {
    const auto act = p.active_facets(v);
    const bool on = std::all_of(face.active_facets.begin(), face.active_facets.end(),
                                [&](std::size_t f) { return std::count(act.begin(), act.end(), f) > 0; });
    if (on && (!best || v < *best)) best = v;
  }
  if (!best) throw VertexNotOnFace("face has no vertex");
  return *best;
}

}  // namespace toricdist
