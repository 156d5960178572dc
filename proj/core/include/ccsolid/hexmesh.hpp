#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccsolid/types.hpp"

namespace ccsolid {

using Cell = std::array<Index, 8>;
using EdgeKey = std::array<Index, 2>;
using FaceKey = std::array<Index, 4>;

/// Unstructured hexahedral mesh with derived edge/face incidence.
///
/// Cells use the corner order of `hex::kCornerBits`. Edges are stored as
/// sorted vertex pairs and faces by one oriented corner cycle (taken from the
/// first incident cell); both are numbered in ascending order of their sorted
/// vertex keys so the derived sets do not depend on cell enumeration order.
/// Immutable after construction.
class HexMesh {
 public:
  HexMesh() = default;

  /// Throws Error when a cell references an invalid or repeated vertex.
  HexMesh(std::vector<Vec3> vertices, std::vector<Cell> cells);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Vec3& vertex(Index v) const { return vertices_[v]; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(Index c) const { return cells_[c]; }
  const EdgeKey& edge(Index e) const { return edges_[e]; }
  const FaceKey& face(Index f) const { return faces_[f]; }

  /// Global edge id of local edge `local` (see hex::kEdges) of cell c.
  Index cell_edge(Index c, int local) const { return cell_edges_[c][local]; }
  /// Global face id of local face `local` (see hex::kFaces) of cell c.
  Index cell_face(Index c, int local) const { return cell_faces_[c][local]; }

  std::span<const Index> vertex_edges(Index v) const { return vertex_edges_[v]; }
  std::span<const Index> vertex_faces(Index v) const { return vertex_faces_[v]; }
  std::span<const Index> vertex_cells(Index v) const { return vertex_cells_[v]; }
  std::span<const Index> edge_faces(Index e) const { return edge_faces_[e]; }
  std::span<const Index> edge_cells(Index e) const { return edge_cells_[e]; }
  std::span<const Index> face_cells(Index f) const { return face_cells_[f]; }

  /// Edge joining a and b, or -1.
  Index find_edge(Index a, Index b) const;
  Index other_end(Index e, Index v) const { return edges_[e][0] == v ? edges_[e][1] : edges_[e][0]; }

  bool is_boundary_face(Index f) const { return face_cells_[f].size() == 1; }
  /// An edge lying on at least one boundary face.
  bool is_boundary_edge(Index e) const { return boundary_edge_[e]; }
  /// A vertex touched by at least one boundary face.
  bool is_boundary_vertex(Index v) const { return boundary_vertex_[v]; }

  /// Number of incident edges.
  int valence(Index v) const { return static_cast<int>(vertex_edges_[v].size()); }
  /// Edge degree: number of faces incident to the edge.
  int edge_degree(Index e) const { return static_cast<int>(edge_faces_[e].size()); }

  /// Local corner index of vertex v inside cell c, or -1.
  int local_corner(Index c, Index v) const;

  std::array<Vec3, 2> bounding_box() const;
  double bounding_box_diagonal() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Cell> cells_;
  std::vector<EdgeKey> edges_;
  std::vector<FaceKey> faces_;
  std::vector<std::array<Index, 12>> cell_edges_;
  std::vector<std::array<Index, 6>> cell_faces_;
  std::vector<std::vector<Index>> vertex_edges_, vertex_faces_, vertex_cells_;
  std::vector<std::vector<Index>> edge_faces_, edge_cells_, face_cells_;
  std::vector<bool> boundary_edge_, boundary_vertex_;
};

/// One-ring of a vertex: incident edges (with their degrees), faces and cells.
struct VertexStar {
  Index center = -1;
  std::vector<Index> edges;
  std::vector<int> edge_degrees;
  std::vector<Index> faces;
  std::vector<Index> cells;
  bool interior = false;

  int valence() const { return static_cast<int>(edges.size()); }
  /// 1 + n + N_face + N_cell; equals 6n - 9 for a simple interior star.
  int size() const { return 1 + valence() + static_cast<int>(faces.size() + cells.size()); }
  /// N_face == 3(n-2) and N_cell == 2(n-2).
  bool satisfies_euler_counts() const;
};

VertexStar vertex_star(const HexMesh& mesh, Index v);

struct ValidationReport {
  struct Finding {
    enum class Kind { NonConforming, NonManifoldFace, NonManifoldEdge, NonManifoldVertex, StarCounts };
    Kind kind;
    Index entity;  // cell, face, edge or vertex id depending on kind
    std::string message;
  };
  std::vector<Finding> findings;
  std::size_t interior_vertices = 0;

  bool ok() const { return findings.empty(); }
};

const char* to_string(ValidationReport::Finding::Kind kind);

ValidationReport validate(const HexMesh& mesh);

// Mesh text format: `nv nc`, nv lines `x y z`, nc lines of 8 vertex indices.
// Lines starting with '#' are ignored.
HexMesh parse_mesh(std::string_view text);
HexMesh read_mesh(const std::string& path);
void write_mesh(std::ostream& out, const HexMesh& mesh);
void write_mesh(const std::string& path, const HexMesh& mesh);
std::string format_mesh(const HexMesh& mesh);

}  // namespace ccsolid
