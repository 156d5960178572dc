#include "ccsolid/hexmesh.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "text_io.hpp"

namespace ccsolid {

namespace {

template <std::size_t N>
std::array<Index, N> sorted(std::array<Index, N> key) {
  std::sort(key.begin(), key.end());
  return key;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

HexMesh::HexMesh(std::vector<Vec3> vertices, std::vector<Cell> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const auto nv = static_cast<Index>(vertices_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int k = 0; k < 8; ++k) {
      const Index v = cells_[c][k];
      if (v < 0 || v >= nv) {
        throw Error("cell " + std::to_string(c) + " references vertex " + std::to_string(v) +
                    " outside [0, " + std::to_string(nv) + ")");
      }
      for (int j = 0; j < k; ++j) {
        if (cells_[c][j] == v) {
          throw Error("cell " + std::to_string(c) + " repeats vertex " + std::to_string(v));
        }
      }
    }
  }

  const std::size_t nc = cells_.size();

  // Edges, numbered by sorted key.
  std::vector<std::tuple<EdgeKey, Index, int>> edge_refs;
  edge_refs.reserve(nc * 12);
  for (std::size_t c = 0; c < nc; ++c) {
    for (int e = 0; e < 12; ++e) {
      const EdgeKey key = sorted(EdgeKey{cells_[c][hex::kEdges[e][0]], cells_[c][hex::kEdges[e][1]]});
      edge_refs.emplace_back(key, static_cast<Index>(c), e);
    }
  }
  std::sort(edge_refs.begin(), edge_refs.end());
  cell_edges_.resize(nc);
  for (const auto& [key, c, local] : edge_refs) {
    if (edges_.empty() || edges_.back() != key) edges_.push_back(key);
    cell_edges_[c][local] = static_cast<Index>(edges_.size() - 1);
  }

  // Faces, numbered by sorted key; the stored cycle comes from the lowest cell.
  std::vector<std::tuple<FaceKey, Index, int>> face_refs;
  face_refs.reserve(nc * 6);
  for (std::size_t c = 0; c < nc; ++c) {
    for (int f = 0; f < 6; ++f) {
      FaceKey cyc;
      for (int k = 0; k < 4; ++k) cyc[k] = cells_[c][hex::kFaces[f][k]];
      face_refs.emplace_back(sorted(cyc), static_cast<Index>(c), f);
    }
  }
  std::sort(face_refs.begin(), face_refs.end());
  cell_faces_.resize(nc);
  FaceKey last_key{-1, -1, -1, -1};
  for (const auto& [key, c, local] : face_refs) {
    if (faces_.empty() || last_key != key) {
      FaceKey cyc;
      for (int k = 0; k < 4; ++k) cyc[k] = cells_[c][hex::kFaces[local][k]];
      faces_.push_back(cyc);
      last_key = key;
    }
    cell_faces_[c][local] = static_cast<Index>(faces_.size() - 1);
  }

  vertex_edges_.assign(nv, {});
  vertex_faces_.assign(nv, {});
  vertex_cells_.assign(nv, {});
  edge_faces_.assign(edges_.size(), {});
  edge_cells_.assign(edges_.size(), {});
  face_cells_.assign(faces_.size(), {});

  for (std::size_t e = 0; e < edges_.size(); ++e) {
    vertex_edges_[edges_[e][0]].push_back(static_cast<Index>(e));
    vertex_edges_[edges_[e][1]].push_back(static_cast<Index>(e));
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (Index v : faces_[f]) vertex_faces_[v].push_back(static_cast<Index>(f));
  }
  for (std::size_t c = 0; c < nc; ++c) {
    const auto ci = static_cast<Index>(c);
    for (Index v : cells_[c]) vertex_cells_[v].push_back(ci);
    for (Index e : cell_edges_[c]) edge_cells_[e].push_back(ci);
    for (Index f : cell_faces_[c]) face_cells_[f].push_back(ci);
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& cyc = faces_[f];
    for (int k = 0; k < 4; ++k) {
      const Index e = find_edge(cyc[k], cyc[(k + 1) % 4]);
      edge_faces_[e].push_back(static_cast<Index>(f));
    }
  }

  boundary_edge_.assign(edges_.size(), false);
  boundary_vertex_.assign(nv, false);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (face_cells_[f].size() != 1) continue;
    const auto& cyc = faces_[f];
    for (int k = 0; k < 4; ++k) {
      boundary_vertex_[cyc[k]] = true;
      boundary_edge_[find_edge(cyc[k], cyc[(k + 1) % 4])] = true;
    }
  }
}

Index HexMesh::find_edge(Index a, Index b) const {
  for (Index e : vertex_edges_[a]) {
    if (other_end(e, a) == b) return e;
  }
  return -1;
}

int HexMesh::local_corner(Index c, Index v) const {
  for (int k = 0; k < 8; ++k) {
    if (cells_[c][k] == v) return k;
  }
  return -1;
}

std::array<Vec3, 2> HexMesh::bounding_box() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& p : vertices_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {lo, hi};
}

double HexMesh::bounding_box_diagonal() const {
  if (vertices_.empty()) return 0.0;
  const auto [lo, hi] = bounding_box();
  return (hi - lo).norm();
}

bool VertexStar::satisfies_euler_counts() const {
  const int n = valence();
  return static_cast<int>(faces.size()) == 3 * (n - 2) && static_cast<int>(cells.size()) == 2 * (n - 2);
}

VertexStar vertex_star(const HexMesh& mesh, Index v) {
  if (v < 0 || static_cast<std::size_t>(v) >= mesh.num_vertices()) {
    throw Error("vertex id " + std::to_string(v) + " out of range");
  }
  VertexStar star;
  star.center = v;
  const auto edges = mesh.vertex_edges(v);
  star.edges.assign(edges.begin(), edges.end());
  for (Index e : star.edges) star.edge_degrees.push_back(mesh.edge_degree(e));
  const auto faces = mesh.vertex_faces(v);
  star.faces.assign(faces.begin(), faces.end());
  const auto cells = mesh.vertex_cells(v);
  star.cells.assign(cells.begin(), cells.end());
  star.interior = !mesh.is_boundary_vertex(v);
  return star;
}

const char* to_string(ValidationReport::Finding::Kind kind) {
  using K = ValidationReport::Finding::Kind;
  switch (kind) {
    case K::NonConforming: return "non-conforming";
    case K::NonManifoldFace: return "non-manifold-face";
    case K::NonManifoldEdge: return "non-manifold-edge";
    case K::NonManifoldVertex: return "non-manifold-vertex";
    case K::StarCounts: return "star-counts";
  }
  return "unknown";
}

ValidationReport validate(const HexMesh& mesh) {
  using Kind = ValidationReport::Finding::Kind;
  ValidationReport report;
  const auto nc = static_cast<Index>(mesh.num_cells());

  // Cells sharing three or more vertices must share a whole face.
  for (Index c = 0; c < nc; ++c) {
    std::map<Index, int> shared;
    for (Index v : mesh.cell(c)) {
      for (Index d : mesh.vertex_cells(v)) {
        if (d > c) ++shared[d];
      }
    }
    for (const auto& [d, count] : shared) {
      if (count < 3) continue;
      bool common_face = false;
      for (int a = 0; a < 6 && !common_face; ++a) {
        for (int b = 0; b < 6; ++b) {
          if (mesh.cell_face(c, a) == mesh.cell_face(d, b)) {
            common_face = true;
            break;
          }
        }
      }
      if (!common_face) {
        report.findings.push_back({Kind::NonConforming, c,
                                   "cells " + std::to_string(c) + " and " + std::to_string(d) + " share " +
                                       std::to_string(count) + " vertices but no face"});
      }
    }
  }

  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face_cells(static_cast<Index>(f)).size() > 2) {
      report.findings.push_back({Kind::NonManifoldFace, static_cast<Index>(f),
                                 "face " + std::to_string(f) + " has " +
                                     std::to_string(mesh.face_cells(static_cast<Index>(f)).size()) +
                                     " incident cells"});
    }
  }

  // Cells around an edge (and around a vertex) must form one face-connected fan.
  auto count_components = [&](std::span<const Index> cells, std::span<const Index> faces) {
    DisjointSet ds(cells.size());
    auto slot = [&](Index c) { return static_cast<int>(std::find(cells.begin(), cells.end(), c) - cells.begin()); };
    for (Index f : faces) {
      const auto fc = mesh.face_cells(f);
      for (std::size_t k = 1; k < fc.size(); ++k) ds.unite(slot(fc[0]), slot(fc[k]));
    }
    int components = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) components += ds.find(static_cast<int>(k)) == static_cast<int>(k);
    return components;
  };
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto ei = static_cast<Index>(e);
    if (count_components(mesh.edge_cells(ei), mesh.edge_faces(ei)) > 1) {
      report.findings.push_back({Kind::NonManifoldEdge, ei,
                                 "cells around edge " + std::to_string(e) + " are not face-connected"});
    }
  }
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto vi = static_cast<Index>(v);
    if (mesh.vertex_cells(vi).empty()) continue;
    if (count_components(mesh.vertex_cells(vi), mesh.vertex_faces(vi)) > 1) {
      report.findings.push_back({Kind::NonManifoldVertex, vi,
                                 "cells around vertex " + std::to_string(v) + " are not face-connected"});
    }
  }

  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto vi = static_cast<Index>(v);
    if (mesh.is_boundary_vertex(vi) || mesh.vertex_cells(vi).empty()) continue;
    ++report.interior_vertices;
    const VertexStar star = vertex_star(mesh, vi);
    if (!star.satisfies_euler_counts()) {
      const int n = star.valence();
      report.findings.push_back(
          {Kind::StarCounts, vi,
           "interior vertex " + std::to_string(v) + " with valence " + std::to_string(n) + " has " +
               std::to_string(star.faces.size()) + " faces (expected " + std::to_string(3 * (n - 2)) + ") and " +
               std::to_string(star.cells.size()) + " cells (expected " + std::to_string(2 * (n - 2)) + ")"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Text format

using detail::parse_number;
using detail::tokenize;

HexMesh parse_mesh(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty mesh file", 0);
  const auto& header = lines[0];
  if (header.tokens.size() != 2) throw ParseError("expected header 'nv nc'", header.number);
  const auto nv = parse_number<long long>(header.tokens[0], header.number);
  const auto nc = parse_number<long long>(header.tokens[1], header.number);
  if (nv < 0 || nc < 0) throw ParseError("negative vertex or cell count", header.number);
  if (static_cast<long long>(lines.size()) - 1 != nv + nc) {
    const int at = lines.size() > 1 ? lines.back().number : header.number;
    throw ParseError("header announces " + std::to_string(nv) + " vertices and " + std::to_string(nc) +
                         " cells but the file has " + std::to_string(lines.size() - 1) + " data lines",
                     at);
  }

  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    const auto& line = lines[1 + i];
    if (line.tokens.size() != 3) throw ParseError("expected 'x y z'", line.number);
    for (int k = 0; k < 3; ++k) vertices[i][k] = parse_number<double>(line.tokens[k], line.number);
  }
  std::vector<Cell> cells(static_cast<std::size_t>(nc));
  for (long long i = 0; i < nc; ++i) {
    const auto& line = lines[1 + nv + i];
    if (line.tokens.size() != 8) throw ParseError("expected 8 vertex indices", line.number);
    for (int k = 0; k < 8; ++k) {
      const auto v = parse_number<long long>(line.tokens[k], line.number);
      if (v < 0 || v >= nv) {
        throw ParseError("vertex index " + std::to_string(v) + " out of range [0, " + std::to_string(nv) + ")",
                         line.number);
      }
      cells[i][k] = static_cast<Index>(v);
      for (int j = 0; j < k; ++j) {
        if (cells[i][j] == cells[i][k]) {
          throw ParseError("duplicate vertex index " + std::to_string(v) + " within a cell", line.number);
        }
      }
    }
  }
  return HexMesh(std::move(vertices), std::move(cells));
}

HexMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_mesh(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

void write_mesh(std::ostream& out, const HexMesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
  char buf[96];
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const auto& c : mesh.cells()) {
    for (int k = 0; k < 8; ++k) out << c[k] << (k == 7 ? '\n' : ' ');
  }
}

void write_mesh(const std::string& path, const HexMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
  if (!out) throw Error("write to '" + path + "' failed");
}

std::string format_mesh(const HexMesh& mesh) {
  std::ostringstream out;
  write_mesh(out, mesh);
  return out.str();
}

}  // namespace ccsolid
