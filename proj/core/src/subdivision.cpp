#include "ccsolid/subdivision.hpp"

#include <algorithm>

namespace ccsolid {

namespace {

// Rule evaluation is written once against a row accessor so the same code
// drives global subdivision (Vec3 rows) and the local linear algebra
// (indicator rows of arbitrary width).

template <class Get>
auto centroid_of(std::span<const Index> ids, Get&& x) {
  auto sum = x(ids[0]).eval();
  for (std::size_t i = 1; i < ids.size(); ++i) sum += x(ids[i]);
  return (sum / static_cast<double>(ids.size())).eval();
}

template <class Get>
auto cell_point(const HexMesh& m, Index c, Get&& x) {
  return centroid_of(std::span<const Index>(m.cell(c)), x);
}

template <class Get>
auto face_centroid(const HexMesh& m, Index f, Get&& x) {
  return centroid_of(std::span<const Index>(m.face(f)), x);
}

template <class Get>
auto edge_midpoint(const HexMesh& m, Index e, Get&& x) {
  return (0.5 * (x(m.edge(e)[0]) + x(m.edge(e)[1]))).eval();
}

template <class Get>
auto face_point(const HexMesh& m, Index f, Get&& x) {
  const auto cells = m.face_cells(f);
  auto a = face_centroid(m, f, x);
  if (cells.size() != 2) return a;
  return ((cell_point(m, cells[0], x) + cell_point(m, cells[1], x) + 2.0 * a) / 4.0).eval();
}

template <class Get>
auto edge_point(const HexMesh& m, Index e, Get&& x) {
  const auto mid = edge_midpoint(m, e, x);
  auto face_sum = (0.0 * mid).eval();
  if (m.is_boundary_edge(e)) {
    int count = 0;
    for (Index f : m.edge_faces(e)) {
      if (!m.is_boundary_face(f)) continue;
      face_sum += face_centroid(m, f, x);
      ++count;
    }
    return (0.5 * (mid + face_sum / count)).eval();
  }
  auto cell_sum = (0.0 * mid).eval();
  for (Index c : m.edge_cells(e)) cell_sum += cell_point(m, c, x);
  for (Index f : m.edge_faces(e)) face_sum += face_centroid(m, f, x);
  const auto c_avg = cell_sum / static_cast<double>(m.edge_cells(e).size());
  const auto f_avg = face_sum / static_cast<double>(m.edge_faces(e).size());
  return ((c_avg + 2.0 * f_avg + mid) / 4.0).eval();
}

template <class Get>
auto vertex_point(const HexMesh& m, Index v, Get&& x) {
  const auto old = x(v).eval();
  auto q = (0.0 * old).eval();
  auto r = (0.0 * old).eval();
  if (m.is_boundary_vertex(v)) {
    int faces = 0;
    int edges = 0;
    for (Index f : m.vertex_faces(v)) {
      if (!m.is_boundary_face(f)) continue;
      q += face_centroid(m, f, x);
      ++faces;
    }
    for (Index e : m.vertex_edges(v)) {
      if (!m.is_boundary_edge(e)) continue;
      r += edge_midpoint(m, e, x);
      ++edges;
    }
    const double ns = edges;
    return ((q / faces + 2.0 * r / edges + (ns - 3.0) * old) / ns).eval();
  }
  auto c = (0.0 * old).eval();
  for (Index cell : m.vertex_cells(v)) c += cell_point(m, cell, x);
  for (Index f : m.vertex_faces(v)) q += face_centroid(m, f, x);
  for (Index e : m.vertex_edges(v)) r += edge_midpoint(m, e, x);
  const auto c_avg = c / static_cast<double>(m.vertex_cells(v).size());
  const auto f_avg = q / static_cast<double>(m.vertex_faces(v).size());
  const auto e_avg = r / static_cast<double>(m.vertex_edges(v).size());
  return ((c_avg + 3.0 * f_avg + 3.0 * e_avg + old) / 8.0).eval();
}

// Child corner j of octant k lands on parent lattice point bits(k) + bits(j)
// in {0,1,2}^3; classify that point as a parent corner, edge, face or cell.
struct LatticeSlot {
  Provenance::Origin origin;
  int local;  // corner, local edge or local face index; unused for the cell
};

LatticeSlot classify(const std::array<int, 3>& p) {
  int ones = 0;
  for (int t = 0; t < 3; ++t) ones += p[t] == 1;
  switch (ones) {
    case 0:
      return {Provenance::Origin::Vertex, hex::corner_at(p[0] / 2, p[1] / 2, p[2] / 2)};
    case 1: {
      std::array<int, 3> a = p, b = p;
      for (int t = 0; t < 3; ++t) {
        if (p[t] == 1) {
          a[t] = 0;
          b[t] = 2;
        }
      }
      return {Provenance::Origin::Edge,
              hex::edge_between(hex::corner_at(a[0] / 2, a[1] / 2, a[2] / 2), hex::corner_at(b[0] / 2, b[1] / 2, b[2] / 2))};
    }
    case 2:
      for (int t = 0; t < 3; ++t) {
        if (p[t] != 1) return {Provenance::Origin::Face, 2 * t + p[t] / 2};
      }
      break;
    default:
      break;
  }
  return {Provenance::Origin::Cell, 0};
}

const std::array<std::array<LatticeSlot, 8>, 8>& child_slots() {
  static const auto table = [] {
    std::array<std::array<LatticeSlot, 8>, 8> t{};
    for (int k = 0; k < 8; ++k) {
      for (int j = 0; j < 8; ++j) {
        std::array<int, 3> p{};
        for (int a = 0; a < 3; ++a) p[a] = hex::kCornerBits[k][a] + hex::kCornerBits[j][a];
        t[k][j] = classify(p);
      }
    }
    return t;
  }();
  return table;
}

void require_valid(const HexMesh& mesh) {
  const auto report = validate(mesh);
  if (!report.ok()) {
    throw Error("cannot subdivide an invalid mesh: " + report.findings.front().message + " (" +
                std::to_string(report.findings.size()) + " finding(s))");
  }
}

Vec3 boundary_limit(const HexMesh& m, Index v) {
  const Vec3& p = m.vertex(v);
  Vec3 edge_sum = Vec3::Zero();
  Vec3 diag_sum = Vec3::Zero();
  int ns = 0;
  int nf = 0;
  for (Index e : m.vertex_edges(v)) {
    if (!m.is_boundary_edge(e)) continue;
    edge_sum += m.vertex(m.other_end(e, v));
    ++ns;
  }
  for (Index f : m.vertex_faces(v)) {
    if (!m.is_boundary_face(f)) continue;
    const auto& cyc = m.face(f);
    const int at = static_cast<int>(std::find(cyc.begin(), cyc.end(), v) - cyc.begin());
    diag_sum += m.vertex(cyc[(at + 2) % 4]);
    ++nf;
  }
  const double n = ns;
  return (n * n * p + 4.0 * edge_sum + diag_sum) / (n * n + 4.0 * n + nf);
}

}  // namespace

std::size_t Provenance::count(Origin origin) const {
  return static_cast<std::size_t>(
      std::count_if(vertices.begin(), vertices.end(), [&](const Source& s) { return s.origin == origin; }));
}

Subdivision subdivide(const HexMesh& mesh) {
  require_valid(mesh);
  const auto nv = static_cast<Index>(mesh.num_vertices());
  const auto ne = static_cast<Index>(mesh.num_edges());
  const auto nf = static_cast<Index>(mesh.num_faces());
  const auto nc = static_cast<Index>(mesh.num_cells());
  const auto x = [&](Index i) -> const Vec3& { return mesh.vertex(i); };

  std::vector<Vec3> points;
  Provenance prov;
  points.reserve(static_cast<std::size_t>(nv + ne + nf + nc));
  prov.vertices.reserve(points.capacity());
  for (Index v = 0; v < nv; ++v) {
    points.push_back(vertex_point(mesh, v, x));
    prov.vertices.push_back({Provenance::Origin::Vertex, v});
  }
  for (Index e = 0; e < ne; ++e) {
    points.push_back(edge_point(mesh, e, x));
    prov.vertices.push_back({Provenance::Origin::Edge, e});
  }
  for (Index f = 0; f < nf; ++f) {
    points.push_back(face_point(mesh, f, x));
    prov.vertices.push_back({Provenance::Origin::Face, f});
  }
  for (Index c = 0; c < nc; ++c) {
    points.push_back(cell_point(mesh, c, x));
    prov.vertices.push_back({Provenance::Origin::Cell, c});
  }

  const auto& slots = child_slots();
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(nc) * 8);
  prov.cells.reserve(cells.capacity());
  for (Index c = 0; c < nc; ++c) {
    for (int k = 0; k < 8; ++k) {
      Cell child;
      for (int j = 0; j < 8; ++j) {
        const auto& s = slots[k][j];
        switch (s.origin) {
          case Provenance::Origin::Vertex: child[j] = mesh.cell(c)[s.local]; break;
          case Provenance::Origin::Edge: child[j] = nv + mesh.cell_edge(c, s.local); break;
          case Provenance::Origin::Face: child[j] = nv + ne + mesh.cell_face(c, s.local); break;
          case Provenance::Origin::Cell: child[j] = nv + ne + nf + c; break;
        }
      }
      cells.push_back(child);
      prov.cells.push_back({c, k});
    }
  }
  return {HexMesh(std::move(points), std::move(cells)), std::move(prov)};
}

HexMesh subdivide(const HexMesh& mesh, int levels) {
  if (levels < 0) throw Error("subdivision depth must be non-negative");
  HexMesh current = mesh;
  for (int i = 0; i < levels; ++i) current = subdivide(current).mesh;
  return current;
}

Eigen::MatrixXd level_one_star(const HexMesh& mesh, Index v, const Eigen::MatrixXd& values) {
  const VertexStar star = vertex_star(mesh, v);
  const auto x = [&](Index i) { return values.row(i); };
  Eigen::MatrixXd out(star.size(), values.cols());
  int row = 0;
  out.row(row++) = vertex_point(mesh, v, x);
  for (Index e : star.edges) out.row(row++) = edge_point(mesh, e, x);
  for (Index f : star.faces) out.row(row++) = face_point(mesh, f, x);
  for (Index c : star.cells) out.row(row++) = cell_point(mesh, c, x);
  return out;
}

Eigen::VectorXd limit_weights(const VertexStar& star) {
  const int n = star.valence();
  const int nf = static_cast<int>(star.faces.size());
  const int nc = static_cast<int>(star.cells.size());
  Eigen::VectorXd w(star.size());
  int sum_m = 0;
  int row = 0;
  w(row++) = 16.0 * (n - 2);
  for (int m : star.edge_degrees) {
    w(row++) = 4.0 * m;
    sum_m += m;
  }
  for (int i = 0; i < nf; ++i) w(row++) = 4.0;
  for (int i = 0; i < nc; ++i) w(row++) = 1.0;
  return w / (30.0 * (n - 2) + 4.0 * sum_m);
}

LimitPoint limit_point(const HexMesh& mesh, Index v) {
  const VertexStar star = vertex_star(mesh, v);
  if (!star.interior) return {boundary_limit(mesh, v), LimitKind::Boundary};
  if (!star.satisfies_euler_counts()) {
    throw Error("vertex " + std::to_string(v) + " has a non-simple star (valence " + std::to_string(star.valence()) +
                ", " + std::to_string(star.faces.size()) + " faces, " + std::to_string(star.cells.size()) + " cells)");
  }
  const auto x = [&](Index i) -> const Vec3& { return mesh.vertex(i); };
  const Eigen::VectorXd w = limit_weights(star);
  Vec3 limit = w(0) * vertex_point(mesh, v, x);
  int row = 1;
  for (Index e : star.edges) limit += w(row++) * edge_point(mesh, e, x);
  for (Index f : star.faces) limit += w(row++) * face_point(mesh, f, x);
  for (Index c : star.cells) limit += w(row++) * cell_point(mesh, c, x);
  return {limit, LimitKind::Interior};
}

std::vector<Index> star_vertices(const HexMesh& mesh, const VertexStar& star) {
  const Index v = star.center;
  std::vector<Index> out;
  out.reserve(star.size());
  out.push_back(v);
  for (Index e : star.edges) out.push_back(mesh.other_end(e, v));
  for (Index f : star.faces) {
    const auto& cyc = mesh.face(f);
    const int at = static_cast<int>(std::find(cyc.begin(), cyc.end(), v) - cyc.begin());
    out.push_back(cyc[(at + 2) % 4]);
  }
  for (Index c : star.cells) {
    const auto& b = hex::kCornerBits[mesh.local_corner(c, v)];
    out.push_back(mesh.cell(c)[hex::corner_at(1 - b[0], 1 - b[1], 1 - b[2])]);
  }
  return out;
}

bool is_simple_interior(const HexMesh& mesh, Index v) {
  const VertexStar star = vertex_star(mesh, v);
  if (!star.interior || !star.satisfies_euler_counts()) return false;
  auto ids = star_vertices(mesh, star);
  std::sort(ids.begin(), ids.end());
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

Eigen::MatrixXd local_subdivision_matrix(const HexMesh& mesh, Index v) {
  if (!is_simple_interior(mesh, v)) {
    throw Error("vertex " + std::to_string(v) + " is not a simple interior vertex");
  }
  const VertexStar star = vertex_star(mesh, v);
  const auto ids = star_vertices(mesh, star);
  Eigen::MatrixXd indicators = Eigen::MatrixXd::Zero(mesh.num_vertices(), star.size());
  for (int k = 0; k < star.size(); ++k) indicators(ids[k], k) = 1.0;
  return level_one_star(mesh, v, indicators);
}

}  // namespace ccsolid
