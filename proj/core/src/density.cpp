#include "ccsolid/density.hpp"

#include <algorithm>

#include "ccsolid/iga.hpp"
#include "ccsolid/subdivision.hpp"

namespace ccsolid {

Index DensityField::index(Index cell, int i, int j, int k) const {
  const int n = 1 << level;
  return static_cast<Index>(cell * per_cell() + (i * n + j) * n + k);
}

double DensityField::total_volume() const {
  double sum = 0.0;
  for (double v : volume) sum += v;
  return sum;
}

double DensityField::solid_volume() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] == 1.0) sum += volume[i];
  }
  return sum;
}

std::size_t DensityField::killed_count(double rho_min) const {
  return static_cast<std::size_t>(std::count(rho.begin(), rho.end(), rho_min));
}

DensityField DensityField::uniform(const SplineModel& model, int level, int quad_order) {
  if (level < 0 || level > 4) throw Error("density level must lie in [0, 4]");
  DensityField field;
  field.level = level;
  const int n = 1 << level;
  const std::size_t count = model.num_cells() * field.per_cell();
  field.rho.assign(count, 1.0);
  field.volume.resize(count);
  field.centroid.resize(count);
  for (Index c = 0; c < static_cast<Index>(model.num_cells()); ++c) {
    const BezierVolume vol = model.patch(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const Index e = field.index(c, i, j, k);
          field.volume[e] = subcell_volume(vol, SubCell{level, {i, j, k}}, quad_order);
          field.centroid[e] = vol.evaluate((i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n);
        }
      }
    }
  }
  return field;
}

Index parent_density_element(Index child, int child_level) {
  if (child_level < 1) throw Error("level-0 elements have no parent");
  const int n = 1 << child_level;
  const Index per_cell = n * n * n;
  const Index cell = child / per_cell;
  const Index local = child % per_cell;
  const int i = local / (n * n), j = (local / n) % n, k = local % n;
  const int m = n / 2;
  return cell * (per_cell / 8) + ((i / 2) * m + j / 2) * m + k / 2;
}

DensityField DensityField::refined(const SplineModel& model, int quad_order) const {
  DensityField out = uniform(model, level + 1, quad_order);
  for (std::size_t e = 0; e < out.size(); ++e) out.rho[e] = rho[parent_density_element(static_cast<Index>(e), level + 1)];
  return out;
}

std::vector<std::vector<Index>> density_adjacency(const HexMesh& mesh, int level) {
  if (level < 0) throw Error("density level must be non-negative");
  // Track which density element each fine cell of the subdivided mesh is.
  std::vector<Index> element(mesh.num_cells());
  std::vector<std::array<int, 3>> pos(mesh.num_cells(), {0, 0, 0});
  std::vector<Index> root(mesh.num_cells());
  for (Index c = 0; c < static_cast<Index>(mesh.num_cells()); ++c) root[c] = c;
  HexMesh fine = mesh;
  for (int l = 0; l < level; ++l) {
    Subdivision sub = subdivide(fine);
    std::vector<std::array<int, 3>> next_pos(sub.mesh.num_cells());
    std::vector<Index> next_root(sub.mesh.num_cells());
    for (std::size_t i = 0; i < next_pos.size(); ++i) {
      const auto& child = sub.provenance.cells[i];
      const auto& b = hex::kCornerBits[child.octant];
      const auto& p = pos[child.parent];
      next_pos[i] = {2 * p[0] + b[0], 2 * p[1] + b[1], 2 * p[2] + b[2]};
      next_root[i] = root[child.parent];
    }
    pos = std::move(next_pos);
    root = std::move(next_root);
    fine = std::move(sub.mesh);
  }
  const int n = 1 << level;
  element.resize(fine.num_cells());
  for (std::size_t c = 0; c < fine.num_cells(); ++c) {
    element[c] = static_cast<Index>(root[c] * n * n * n + (pos[c][0] * n + pos[c][1]) * n + pos[c][2]);
  }
  std::vector<std::vector<Index>> adjacency(fine.num_cells());
  for (Index f = 0; f < static_cast<Index>(fine.num_faces()); ++f) {
    const auto cells = fine.face_cells(f);
    if (cells.size() != 2) continue;
    adjacency[element[cells[0]]].push_back(element[cells[1]]);
    adjacency[element[cells[1]]].push_back(element[cells[0]]);
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());
  return adjacency;
}

}  // namespace ccsolid
