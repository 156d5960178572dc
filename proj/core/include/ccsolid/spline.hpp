#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ccsolid/bezier.hpp"
#include "ccsolid/hexmesh.hpp"

namespace ccsolid {

/// Tricubic Bezier approximation of the Catmull-Clark solid of a hex mesh.
///
/// The global control-point table is laid out as one point per mesh vertex,
/// two per edge (one per endpoint), four per face (one per face corner) and
/// eight per cell (one per cell corner), in that block order. Each cell maps
/// its 64 slots (bezier_index order) into the table, so neighbouring cells
/// share their common boundary layers by index.
struct SplineModel {
  std::vector<Vec3> control_points;
  std::vector<std::array<Index, 64>> cells;

  std::size_t num_cells() const { return cells.size(); }
  BezierVolume patch(Index c) const;
};

/// Interior control point of `cell` next to local corner `corner`: the mask
/// [2(n-2) v1 + m2 v2 + m3 v3 + m5 v5 + 2(v4 + v6 + v7) + v8] / [2(n-2) + m2 + m3 + m5 + 7].
Vec3 interior_bezier_point(const HexMesh& mesh, Index cell, int corner);

/// Global table index of slot (a,b,c) of cell c, following the layout above.
Index spline_slot(const HexMesh& mesh, Index c, int a, int b, int cc);

/// Throws Error when the mesh fails validate().
SplineModel build_spline_model(const HexMesh& mesh);

/// Interior cell whose eight corners are interior with valence 6 and whose
/// incident edges all have degree 4. On such a cell the model coincides with
/// the uniform tricubic B-spline of the surrounding control lattice.
bool is_regular_cell(const HexMesh& mesh, Index c);

/// Cells whose Jacobian determinant is non-positive at any of the 2x2x2
/// parametric probe points (1/4, 3/4)^3 or at the cell centre.
std::vector<Index> degenerate_cells(const SplineModel& model);

struct ErrorSample {
  Index vertex;    // vertex of the subdivided mesh
  Index cell;      // ancestor cell in the input mesh
  Vec3 parameter;  // dyadic parameter inside the ancestor cell
  double distance;
  bool interior;  // interior vertex of the subdivided mesh
  bool regular;   // lies in the closure of a regular ancestor cell
};

struct ErrorStats {
  int depth = 0;
  double max = 0.0;
  double mean = 0.0;
  std::vector<ErrorSample> samples;

  /// Largest distance over interior samples of regular ancestor cells.
  double regular_interior_max() const;
};

/// Distance between subdivision limit points of the `depth`-times subdivided
/// mesh and the spline evaluated at the matching dyadic parameters. Throws
/// Error when 8^depth * cells exceeds 1e7.
ErrorStats approximation_error(const HexMesh& mesh, const SplineModel& model, int depth);

// Text format: `ncp ncell`, ncp lines `x y z`, ncell lines of 64 indices.
SplineModel parse_spline_model(std::string_view text);
void write_spline_model(std::ostream& out, const SplineModel& model);
void write_spline_model(const std::string& path, const SplineModel& model);

}  // namespace ccsolid
