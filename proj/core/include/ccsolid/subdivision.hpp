#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ccsolid/hexmesh.hpp"

namespace ccsolid {

/// Where each vertex and cell of a subdivided mesh came from.
///
/// New vertices are numbered: old vertices first (same ids), then one point
/// per old edge, per old face and per old cell, each block in entity id order.
/// Child cell `8 * c + k` is the octant of parent c adjacent to its corner k
/// and keeps the parent's parametric orientation.
struct Provenance {
  enum class Origin { Vertex, Edge, Face, Cell };
  struct Source {
    Origin origin;
    Index id;
  };
  struct Child {
    Index parent;
    int octant;  // parent corner index
  };
  std::vector<Source> vertices;
  std::vector<Child> cells;

  std::size_t count(Origin origin) const;
};

struct Subdivision {
  HexMesh mesh;
  Provenance provenance;
};

/// One step of Catmull-Clark solid subdivision. Interior entities use the
/// volumetric rules; entities on the boundary surface use Catmull-Clark
/// surface rules on the boundary quads, so the boundary stays a Catmull-Clark
/// surface. Throws Error on meshes that fail validate().
Subdivision subdivide(const HexMesh& mesh);

/// Applies `subdivide` `levels` times (levels >= 0).
HexMesh subdivide(const HexMesh& mesh, int levels);

enum class LimitKind { Interior, Boundary };

struct LimitPoint {
  Vec3 position;
  LimitKind kind;
};

/// Limit position of a vertex. Interior vertices use the explicit volumetric
/// limit formula on the level-one star; boundary vertices fall back to the
/// Catmull-Clark surface limit mask of the boundary quad mesh.
/// Throws Error for interior vertices whose star violates the Euler counts.
LimitPoint limit_point(const HexMesh& mesh, Index v);

/// Level-one star of v, ordered (v', edge points, face points, cell points)
/// following vertex_star(mesh, v). Rows of `values` are per-vertex quantities
/// (positions, or any linear attribute).
Eigen::MatrixXd level_one_star(const HexMesh& mesh, Index v, const Eigen::MatrixXd& values);

/// Weights of the volumetric limit formula over the level-one star:
/// (16(n-2), 4 m_1..4 m_n, 4 x 3(n-2), 1 x 2(n-2)) / (30(n-2) + 4 sum m_j).
Eigen::VectorXd limit_weights(const VertexStar& star);

/// Old-level star vertices of a simple interior vertex, ordered
/// (v, edge neighbours, face diagonals, cell diagonals) following vertex_star.
std::vector<Index> star_vertices(const HexMesh& mesh, const VertexStar& star);

/// Interior vertex whose star satisfies the Euler counts and whose 6n - 9
/// star vertices are pairwise distinct.
bool is_simple_interior(const HexMesh& mesh, Index v);

/// Local subdivision matrix S with V^{k+1} = S V^k over the star of a simple
/// interior vertex, built by pushing indicator vectors through one
/// subdivision step. Throws Error for non-simple stars.
Eigen::MatrixXd local_subdivision_matrix(const HexMesh& mesh, Index v);

}  // namespace ccsolid
