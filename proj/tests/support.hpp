#pragma once

// Independent oracles and fixtures shared by the unit tests and the
// acceptance binary. Nothing here calls into the code under test except for
// mesh construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ccsolid/hexmesh.hpp"
#include "ccsolid/meshgen.hpp"
#include "ccsolid/spline.hpp"
#include "ccsolid/subdivision.hpp"

namespace ccsolid::oracle {

inline std::string data_path(const std::string& name) { return std::string(CCSOLID_TEST_DATA_DIR) + "/" + name; }

/// de Casteljau evaluation of a 4x4x4 net in (a,b,c) row-major order.
inline Vec3 de_casteljau(const std::array<Vec3, 64>& net, double u, double v, double w) {
  auto curve = [](std::array<Vec3, 4> p, double t) {
    for (int r = 1; r < 4; ++r) {
      for (int i = 0; i < 4 - r; ++i) p[i] = (1 - t) * p[i] + t * p[i + 1];
    }
    return p[0];
  };
  std::array<Vec3, 16> plane;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      std::array<Vec3, 4> line;
      for (int c = 0; c < 4; ++c) line[c] = net[(a * 4 + b) * 4 + c];
      plane[a * 4 + b] = curve(line, w);
    }
  }
  std::array<Vec3, 4> col;
  for (int a = 0; a < 4; ++a) {
    std::array<Vec3, 4> line;
    for (int b = 0; b < 4; ++b) line[b] = plane[a * 4 + b];
    col[a] = curve(line, v);
  }
  return curve(col, u);
}

/// Bezier net of one segment of a uniform cubic B-spline volume whose
/// 4x4x4 control points are `p[i][j][k]` (i, j, k = 0..3 cover the segment
/// between the middle two knots).
inline std::array<Vec3, 64> bspline_to_bezier(const std::array<std::array<std::array<Vec3, 4>, 4>, 4>& p) {
  const double m[4][4] = {
      {1.0 / 6, 4.0 / 6, 1.0 / 6, 0},
      {0, 4.0 / 6, 2.0 / 6, 0},
      {0, 2.0 / 6, 4.0 / 6, 0},
      {0, 1.0 / 6, 4.0 / 6, 1.0 / 6},
  };
  std::array<Vec3, 64> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        Vec3 s = Vec3::Zero();
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) s += m[a][i] * m[b][j] * m[c][k] * p[i][j][k];
          }
        }
        out[(a * 4 + b) * 4 + c] = s;
      }
    }
  }
  return out;
}

/// Lattice with every vertex moved by a uniform random offset in
/// [-amplitude, amplitude]^3 (relative to unit spacing).
inline HexMesh perturbed_lattice(int nx, int ny, int nz, double amplitude, unsigned seed) {
  const HexMesh base = make_lattice(nx, ny, nz, Vec3(nx, ny, nz));
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-amplitude, amplitude);
  std::vector<Vec3> vertices = base.vertices();
  for (auto& v : vertices) v += Vec3(jitter(rng), jitter(rng), jitter(rng));
  return HexMesh(std::move(vertices), base.cells());
}

/// Ball split into one hexahedron per triangle of a convex triangulated
/// polyhedron whose vertices `dirs` surround the origin. The origin becomes an
/// interior vertex of valence dirs.size() and the degree of its edge towards
/// dirs[i] is the number of triangles at i.
inline HexMesh cone_star(const std::vector<Vec3>& dirs, const std::vector<std::array<int, 3>>& triangles) {
  std::vector<Vec3> vertices{Vec3::Zero()};
  for (const Vec3& d : dirs) vertices.push_back(d.normalized());
  std::map<std::pair<int, int>, Index> edge_point;
  auto on_edge = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto [it, fresh] = edge_point.try_emplace(key, static_cast<Index>(vertices.size()));
    if (fresh) vertices.push_back((dirs[a] + dirs[b]).normalized());
    return it->second;
  };
  std::vector<Cell> cells;
  for (auto [a, b, c] : triangles) {
    if (dirs[a].dot(dirs[b].cross(dirs[c])) < 0) std::swap(b, c);
    const Index centre = static_cast<Index>(vertices.size());
    vertices.push_back((dirs[a] + dirs[b] + dirs[c]).normalized());
    cells.push_back(Cell{0, a + 1, on_edge(a, b), b + 1, c + 1, on_edge(a, c), centre, on_edge(b, c)});
  }
  return HexMesh(std::move(vertices), std::move(cells));
}

/// cone_star over the regular icosahedron: valence 12, every edge degree 5.
inline HexMesh icosahedral_star() {
  const double phi = (1 + std::sqrt(5.0)) / 2;
  std::vector<Vec3> d;
  for (double s : {-1.0, 1.0}) {
    for (double t : {-1.0, 1.0}) {
      d.emplace_back(0, s, t * phi);
      d.emplace_back(s, t * phi, 0);
      d.emplace_back(t * phi, 0, s);
    }
  }
  std::vector<std::array<int, 3>> tris;
  auto adjacent = [&](int i, int j) { return std::abs((d[i] - d[j]).norm() - 2.0) < 1e-9; };
  for (int i = 0; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) {
      for (int k = j + 1; k < 12; ++k) {
        if (adjacent(i, j) && adjacent(j, k) && adjacent(i, k)) tris.push_back({i, j, k});
      }
    }
  }
  return cone_star(d, tris);
}

/// Integer lattice coordinates of a point of a unit-spacing lattice.
inline std::array<int, 3> lattice_coords(const Vec3& p) {
  return {static_cast<int>(std::lround(p.x())), static_cast<int>(std::lround(p.y())), static_cast<int>(std::lround(p.z()))};
}

/// B-spline conversion of the 4x4x4 vertex neighbourhood of cell c of
/// `mesh`, which shares its connectivity with the unit lattice `base`.
inline std::array<Vec3, 64> regular_cell_oracle(const HexMesh& base, const HexMesh& mesh, Index c) {
  std::map<std::array<int, 3>, Index> node;
  for (Index v = 0; v < static_cast<Index>(base.num_vertices()); ++v) node[lattice_coords(base.vertex(v))] = v;
  const auto o = lattice_coords(base.vertex(base.cell(c)[0]));
  std::array<std::array<std::array<Vec3, 4>, 4>, 4> p;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) p[i][j][k] = mesh.vertex(node.at({o[0] - 1 + i, o[1] - 1 + j, o[2] - 1 + k}));
    }
  }
  return bspline_to_bezier(p);
}

/// Vertex id of lattice node (i, j, k) in make_lattice(nx, ny, nz).
inline Index lattice_vertex(const HexMesh& mesh, const Vec3& position) {
  for (Index v = 0; v < static_cast<Index>(mesh.num_vertices()); ++v) {
    if ((mesh.vertex(v) - position).norm() < 1e-12) return v;
  }
  return -1;
}

/// C0 Bezier model of an nx x ny x nz block of unit cells whose control
/// points form the uniform (3n+1)-lattice with spacing 1/3. Points strictly
/// inside the block move by up to `jitter` so cells are curved while the
/// outer layers stay on the planes of the block.
inline SplineModel bezier_lattice(int nx, int ny, int nz, double jitter = 0.0, unsigned seed = 1) {
  const int px = 3 * nx + 1, py = 3 * ny + 1, pz = 3 * nz + 1;
  auto id = [&](int i, int j, int k) { return static_cast<Index>((i * py + j) * pz + k); };
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  SplineModel m;
  for (int i = 0; i < px; ++i) {
    for (int j = 0; j < py; ++j) {
      for (int k = 0; k < pz; ++k) {
        Vec3 p(i / 3.0, j / 3.0, k / 3.0);
        const bool inside = i > 0 && j > 0 && k > 0 && i < px - 1 && j < py - 1 && k < pz - 1;
        if (inside && jitter > 0.0) p += Vec3(u(rng), u(rng), u(rng));
        m.control_points.push_back(p);
      }
    }
  }
  for (int ci = 0; ci < nx; ++ci) {
    for (int cj = 0; cj < ny; ++cj) {
      for (int ck = 0; ck < nz; ++ck) {
        std::array<Index, 64> cell{};
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) cell[(a * 4 + b) * 4 + c] = id(3 * ci + a, 3 * cj + b, 3 * ck + c);
          }
        }
        m.cells.push_back(cell);
      }
    }
  }
  return m;
}

/// Cubic Bernstein polynomial i and its derivative, written out directly.
inline double bernstein_value(int i, double t) {
  const double c[4] = {1, 3, 3, 1};
  return c[i] * std::pow(t, i) * std::pow(1 - t, 3 - i);
}
inline double bernstein_derivative(int i, double t) {
  const double c[4] = {1, 3, 3, 1};
  double d = 0.0;
  if (i > 0) d += c[i] * i * std::pow(t, i - 1) * std::pow(1 - t, 3 - i);
  if (i < 3) d -= c[i] * (3 - i) * std::pow(t, i) * std::pow(1 - t, 2 - i);
  return d;
}

/// The printed S6 fixture, 27 x 27.
inline Eigen::MatrixXd read_s6_fixture() {
  std::ifstream in(data_path("fig3_s6.txt"));
  Eigen::MatrixXd s(27, 27);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream tokens(line);
    std::string t;
    for (int col = 0; col < 27; ++col) {
      tokens >> t;
      const auto slash = t.find('/');
      s(row, col) = slash == std::string::npos ? std::stod(t) : std::stod(t.substr(0, slash)) / std::stod(t.substr(slash + 1));
    }
    ++row;
  }
  if (row != 27) throw std::runtime_error("S6 fixture has " + std::to_string(row) + " rows");
  return s;
}

/// Star position of each fixture row, as lattice offsets from the centre:
/// vertex, edges (+x, +y, -x, -y, +z, -z), the 12 faces and the 8 cells.
inline std::array<std::array<int, 3>, 27> s6_fixture_offsets() {
  const int e[7][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  const int faces[12][2] = {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {4, 5}, {2, 5}, {2, 6}, {4, 6}, {1, 5}, {3, 5}, {3, 6}, {1, 6}};
  const int cells[8][3] = {{1, 2, 5}, {2, 3, 5}, {1, 4, 5}, {3, 4, 5}, {1, 2, 6}, {2, 3, 6}, {1, 4, 6}, {3, 4, 6}};
  std::array<std::array<int, 3>, 27> out{};
  for (int i = 0; i < 7; ++i) out[i] = {e[i][0], e[i][1], e[i][2]};
  for (int f = 0; f < 12; ++f) {
    for (int t = 0; t < 3; ++t) out[7 + f][t] = e[faces[f][0]][t] + e[faces[f][1]][t];
  }
  for (int c = 0; c < 8; ++c) {
    for (int t = 0; t < 3; ++t) out[19 + c][t] = e[cells[c][0]][t] + e[cells[c][1]][t] + e[cells[c][2]][t];
  }
  return out;
}

/// Fixture cells where the printed matrix places a face-face weight 1/32 on
/// the opposite face of the one the cube symmetry requires (rows 12 and 16,
/// zero-based). Each row has one entry moved, so two cells per row differ.
inline constexpr std::array<std::array<int, 2>, 4> kS6MisprintedCells{{{12, 14}, {12, 16}, {16, 10}, {16, 12}}};

/// For each fixture row, the index into the star of `v` (a regular vertex of a
/// unit-spacing lattice) of the vertex at the same offset.
inline std::array<int, 27> s6_star_order(const HexMesh& mesh, Index v) {
  const auto ids = star_vertices(mesh, vertex_star(mesh, v));
  const auto offsets = s6_fixture_offsets();
  std::array<int, 27> out{};
  out.fill(-1);
  for (int k = 0; k < static_cast<int>(ids.size()); ++k) {
    const Vec3 d = mesh.vertex(ids[k]) - mesh.vertex(v);
    const std::array<int, 3> o{static_cast<int>(std::lround(d.x())), static_cast<int>(std::lround(d.y())),
                               static_cast<int>(std::lround(d.z()))};
    for (int r = 0; r < 27; ++r) {
      if (offsets[r] == o) out[r] = k;
    }
  }
  return out;
}

/// Entries of a 27 x 27 star matrix (fixture order) that disagree with the
/// value held by the majority of their orbit under the 48 symmetries of the
/// cube. A matrix of rules that treat all directions alike has none.
inline std::vector<std::array<int, 2>> s6_symmetry_violations(const Eigen::MatrixXd& s) {
  const auto offsets = s6_fixture_offsets();
  auto row_of = [&](const std::array<int, 3>& o) {
    for (int r = 0; r < 27; ++r) {
      if (offsets[r] == o) return r;
    }
    return -1;
  };
  std::vector<std::array<int, 27>> maps;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      std::array<int, 27> m{};
      for (int r = 0; r < 27; ++r) {
        std::array<int, 3> o{};
        for (int t = 0; t < 3; ++t) o[t] = ((signs >> t) & 1 ? -1 : 1) * offsets[r][perm[t]];
        m[r] = row_of(o);
      }
      maps.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::array<int, 2>> out;
  for (int i = 0; i < 27; ++i) {
    for (int j = 0; j < 27; ++j) {
      std::map<double, int> votes;
      for (const auto& m : maps) ++votes[s(m[i], m[j])];
      const auto best = std::max_element(votes.begin(), votes.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
      if (s(i, j) != best->first) out.push_back({i, j});
    }
  }
  return out;
}

/// One-dimensional regular subdivision weight of a lattice offset p (new
/// star) against q (old star): the cubic B-spline refinement stencil.
inline double s6_oracle(const std::array<int, 3>& p, const std::array<int, 3>& q) {
  auto w1 = [](int a, int b) {
    if (a == 0) return b == 0 ? 0.75 : 0.125;
    return (b == 0 || b == a) ? 0.5 : 0.0;
  };
  return w1(p[0], q[0]) * w1(p[1], q[1]) * w1(p[2], q[2]);
}

}  // namespace ccsolid::oracle
