#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ccsolid/density.hpp"
#include "ccsolid/hexmesh.hpp"
#include "ccsolid/iga.hpp"
#include "ccsolid/spline.hpp"

namespace ccsolid {

/// Legacy VTK unstructured grid of hexahedra (type 12) or vertices (type 1).
struct VtkGrid {
  std::vector<Vec3> points;
  std::vector<Cell> hexes;
  bool vertex_cloud = false;  // write one VTK_VERTEX per point instead of hexes
  std::vector<std::pair<std::string, std::vector<double>>> cell_scalars;
  std::vector<std::pair<std::string, std::vector<double>>> point_scalars;
  std::vector<std::pair<std::string, std::vector<Vec3>>> point_vectors;
};

/// Throws Error when a field size does not match the grid.
void write_vtk(std::ostream& out, const VtkGrid& grid, const std::string& title = "ccsolid");
void write_vtk(const std::string& path, const VtkGrid& grid, const std::string& title = "ccsolid");

VtkGrid mesh_grid(const HexMesh& mesh);
VtkGrid point_cloud(std::vector<Vec3> points);

/// Every Bezier cell sampled on a d x d x d grid of sub-hexahedra. Sub-hex
/// (i, j, k) of cell c has index c d^3 + (i d + j) d + k.
VtkGrid sample_model(const SplineModel& model, int d);

/// Sampled model with the density of the containing density element as cell
/// data; d is raised to the next multiple of 2^level. With `omit_below` > 0,
/// sub-hexes whose density is below it are dropped.
VtkGrid density_grid(const SplineModel& model, const DensityField& density, int d, double omit_below = 0.0);

/// Adds the solution field (temperature or displacement) as point data.
void add_solution(VtkGrid& grid, const SplineModel& model, const Solution& sol, int d);

}  // namespace ccsolid
