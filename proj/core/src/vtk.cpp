#include "ccsolid/vtk.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace ccsolid {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void check_size(std::size_t got, std::size_t want, const std::string& name) {
  if (got != want) {
    throw Error("VTK field '" + name + "' has " + std::to_string(got) + " values, expected " + std::to_string(want));
  }
}

// Point (i, j, k) of the (d+1)^3 sample lattice of one cell.
Index lattice_id(int d, int i, int j, int k) { return static_cast<Index>((i * (d + 1) + j) * (d + 1) + k); }

}  // namespace

void write_vtk(std::ostream& out, const VtkGrid& grid, const std::string& title) {
  const std::size_t np = grid.points.size();
  const std::size_t nc = grid.vertex_cloud ? np : grid.hexes.size();
  for (const auto& [name, values] : grid.cell_scalars) check_size(values.size(), nc, name);
  for (const auto& [name, values] : grid.point_scalars) check_size(values.size(), np, name);
  for (const auto& [name, values] : grid.point_vectors) check_size(values.size(), np, name);

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (const auto& p : grid.points) out << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
  if (grid.vertex_cloud) {
    out << "CELLS " << nc << ' ' << 2 * nc << '\n';
    for (std::size_t i = 0; i < nc; ++i) out << "1 " << i << '\n';
    out << "CELL_TYPES " << nc << '\n';
    for (std::size_t i = 0; i < nc; ++i) out << "1\n";
  } else {
    out << "CELLS " << nc << ' ' << 9 * nc << '\n';
    for (const auto& h : grid.hexes) {
      out << 8;
      for (Index v : h) out << ' ' << v;
      out << '\n';
    }
    out << "CELL_TYPES " << nc << '\n';
    for (std::size_t i = 0; i < nc; ++i) out << "12\n";
  }
  if (!grid.cell_scalars.empty()) {
    out << "CELL_DATA " << nc << '\n';
    for (const auto& [name, values] : grid.cell_scalars) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << fmt(v) << '\n';
    }
  }
  if (!grid.point_scalars.empty() || !grid.point_vectors.empty()) {
    out << "POINT_DATA " << np << '\n';
    for (const auto& [name, values] : grid.point_scalars) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << fmt(v) << '\n';
    }
    for (const auto& [name, values] : grid.point_vectors) {
      out << "VECTORS " << name << " double\n";
      for (const auto& v : values) out << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
    }
  }
}

void write_vtk(const std::string& path, const VtkGrid& grid, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write VTK file '" + path + "'");
  write_vtk(out, grid, title);
  if (!out) throw Error("write to '" + path + "' failed");
}

VtkGrid mesh_grid(const HexMesh& mesh) {
  VtkGrid grid;
  grid.points = mesh.vertices();
  grid.hexes = mesh.cells();
  return grid;
}

VtkGrid point_cloud(std::vector<Vec3> points) {
  VtkGrid grid;
  grid.points = std::move(points);
  grid.vertex_cloud = true;
  return grid;
}

VtkGrid sample_model(const SplineModel& model, int d) {
  if (d < 1) throw Error("sampling resolution must be at least 1");
  VtkGrid grid;
  const int per_cell = (d + 1) * (d + 1) * (d + 1);
  grid.points.reserve(model.num_cells() * per_cell);
  grid.hexes.reserve(model.num_cells() * d * d * d);
  for (Index c = 0; c < static_cast<Index>(model.num_cells()); ++c) {
    const BezierVolume vol = model.patch(c);
    const auto base = static_cast<Index>(grid.points.size());
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) {
        for (int k = 0; k <= d; ++k) grid.points.push_back(vol.evaluate(double(i) / d, double(j) / d, double(k) / d));
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          Cell h;
          for (int corner = 0; corner < 8; ++corner) {
            const auto& b = hex::kCornerBits[corner];
            h[corner] = base + lattice_id(d, i + b[0], j + b[1], k + b[2]);
          }
          grid.hexes.push_back(h);
        }
      }
    }
  }
  return grid;
}

VtkGrid density_grid(const SplineModel& model, const DensityField& density, int d, double omit_below) {
  if (density.size() != model.num_cells() * density.per_cell()) throw Error("density field does not match the model");
  const int n = 1 << density.level;
  d = std::max(d, 1);
  d = ((d + n - 1) / n) * n;
  VtkGrid full = sample_model(model, d);
  std::vector<double> rho(full.hexes.size());
  const int ratio = d / n;
  for (Index c = 0; c < static_cast<Index>(model.num_cells()); ++c) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          rho[static_cast<std::size_t>(c) * d * d * d + (i * d + j) * d + k] =
              density.rho[density.index(c, i / ratio, j / ratio, k / ratio)];
        }
      }
    }
  }
  if (omit_below <= 0.0) {
    full.cell_scalars.emplace_back("density", std::move(rho));
    return full;
  }
  VtkGrid kept;
  kept.points = std::move(full.points);
  std::vector<double> kept_rho;
  for (std::size_t h = 0; h < full.hexes.size(); ++h) {
    if (rho[h] < omit_below) continue;
    kept.hexes.push_back(full.hexes[h]);
    kept_rho.push_back(rho[h]);
  }
  kept.cell_scalars.emplace_back("density", std::move(kept_rho));
  return kept;
}

void add_solution(VtkGrid& grid, const SplineModel& model, const Solution& sol, int d) {
  const int per_cell = (d + 1) * (d + 1) * (d + 1);
  if (grid.points.size() != model.num_cells() * per_cell) throw Error("grid was not sampled from this model at d");
  const int ncomp = components(sol.problem);
  std::vector<double> temperature;
  std::vector<Vec3> displacement;
  for (Index c = 0; c < static_cast<Index>(model.num_cells()); ++c) {
    const auto& pts = model.cells[c];
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; j <= d; ++j) {
        for (int k = 0; k <= d; ++k) {
          const TrivariateBasis basis = trivariate_basis(double(i) / d, double(j) / d, double(k) / d);
          Vec3 u = Vec3::Zero();
          for (int a = 0; a < 64; ++a) {
            for (int p = 0; p < ncomp; ++p) u[p] += basis.value[a] * sol.U(pts[a] * ncomp + p);
          }
          if (ncomp == 1) {
            temperature.push_back(u.x());
          } else {
            displacement.push_back(u);
          }
        }
      }
    }
  }
  if (ncomp == 1) {
    grid.point_scalars.emplace_back("temperature", std::move(temperature));
  } else {
    grid.point_vectors.emplace_back("displacement", std::move(displacement));
  }
}

}  // namespace ccsolid
