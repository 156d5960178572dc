#pragma once

#include <vector>

#include "ccsolid/hexmesh.hpp"
#include "ccsolid/spline.hpp"

namespace ccsolid {

/// Design densities on the dyadic sub-cubes of level `level` of every cell.
/// Element index: cell * 8^level + (i * 2^level + j) * 2^level + k, with
/// (i, j, k) the sub-cube position along (u, v, w).
struct DensityField {
  int level = 0;
  std::vector<double> rho;
  std::vector<double> volume;
  std::vector<Vec3> centroid;  // spline image of the sub-cube parametric centre

  std::size_t size() const { return rho.size(); }
  std::size_t per_cell() const { return std::size_t{1} << (3 * level); }
  Index index(Index cell, int i, int j, int k) const;

  double total_volume() const;
  /// Volume of elements with rho == 1.
  double solid_volume() const;
  std::size_t killed_count(double rho_min) const;

  /// All densities 1 on level `level`.
  static DensityField uniform(const SplineModel& model, int level, int quad_order = 4);
  /// Next level; children inherit their parent's density.
  DensityField refined(const SplineModel& model, int quad_order = 4) const;
};

/// Index of the parent element of a level-(s+1) element on level s.
Index parent_density_element(Index child, int child_level);

/// Face neighbours of every density element of level `level`, derived from the
/// topology of the mesh subdivided `level` times.
std::vector<std::vector<Index>> density_adjacency(const HexMesh& mesh, int level);

}  // namespace ccsolid
