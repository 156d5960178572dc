#include "ccsolid/meshgen.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace ccsolid {

HexMesh make_lattice(int nx, int ny, int nz, const Vec3& extent, const Vec3& origin) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error("lattice dimensions must be positive");
  const auto id = [&](int i, int j, int k) { return static_cast<Index>(i + (nx + 1) * (j + (ny + 1) * k)); };
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        vertices.push_back(origin + Vec3(extent.x() * i / nx, extent.y() * j / ny, extent.z() * k / nz));
      }
    }
  }
  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        Cell cell;
        for (int c = 0; c < 8; ++c) {
          const auto& b = hex::kCornerBits[c];
          cell[c] = id(i + b[0], j + b[1], k + b[2]);
        }
        cells.push_back(cell);
      }
    }
  }
  return HexMesh(std::move(vertices), std::move(cells));
}

HexMesh make_split_tetrahedron() {
  const std::array<Vec3, 4> tet{Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  std::vector<Vec3> vertices(tet.begin(), tet.end());

  // Edge midpoints 4..9, face centroids 10..13, centroid 14.
  std::array<std::array<Index, 4>, 4> edge_mid{};
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      edge_mid[a][b] = edge_mid[b][a] = static_cast<Index>(vertices.size());
      vertices.push_back(0.5 * (tet[a] + tet[b]));
    }
  }
  // Face opposite to tet vertex `o` is indexed by o.
  std::array<Index, 4> face_mid{};
  for (int o = 0; o < 4; ++o) {
    Vec3 sum = Vec3::Zero();
    for (int a = 0; a < 4; ++a) {
      if (a != o) sum += tet[a];
    }
    face_mid[o] = static_cast<Index>(vertices.size());
    vertices.push_back(sum / 3.0);
  }
  const auto centroid = static_cast<Index>(vertices.size());
  vertices.push_back(Vec3::Zero());

  std::vector<Cell> cells;
  for (int i = 0; i < 4; ++i) {
    std::array<int, 3> o{};
    int n = 0;
    for (int a = 0; a < 4; ++a) {
      if (a != i) o[n++] = a;
    }
    auto [j, k, l] = o;
    const Mat3 frame = (Mat3() << tet[j] - tet[i], tet[k] - tet[i], tet[l] - tet[i]).finished();
    if (frame.determinant() < 0) std::swap(j, k);
    // The face through i, a, b is the one opposite the remaining vertex.
    const auto face = [&](int a, int b) { return face_mid[6 - i - a - b]; };
    cells.push_back(Cell{i, edge_mid[i][j], face(j, k), edge_mid[i][k], edge_mid[i][l], face(j, l), centroid,
                         face(k, l)});
  }
  return HexMesh(std::move(vertices), std::move(cells));
}

HexMesh make_fan_prism(int sectors, int layers, double radius, double height) {
  if (sectors < 3) throw Error("a fan prism needs at least 3 sectors");
  if (layers < 1) throw Error("a fan prism needs at least one layer");
  const int per_level = 1 + 2 * sectors;
  std::vector<Vec3> vertices;
  for (int l = 0; l <= layers; ++l) {
    const double z = height * l / layers;
    vertices.emplace_back(0.0, 0.0, z);
    for (int i = 0; i < sectors; ++i) {
      const double a0 = 2.0 * std::numbers::pi * i / sectors;
      const double a1 = 2.0 * std::numbers::pi * (i + 1) / sectors;
      const Vec3 s0(radius * std::cos(a0), radius * std::sin(a0), z);
      const Vec3 s1(radius * std::cos(a1), radius * std::sin(a1), z);
      vertices.push_back(s0);                                       // spoke i
      vertices.emplace_back(s0.x() + s1.x(), s0.y() + s1.y(), z);  // outer corner of sector i
    }
  }
  const auto spoke = [&](int l, int i) { return static_cast<Index>(l * per_level + 1 + 2 * (i % sectors)); };
  const auto outer = [&](int l, int i) { return static_cast<Index>(l * per_level + 2 + 2 * i); };
  const auto axis = [&](int l) { return static_cast<Index>(l * per_level); };
  std::vector<Cell> cells;
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i < sectors; ++i) {
      cells.push_back(Cell{axis(l), spoke(l, i), outer(l, i), spoke(l, i + 1), axis(l + 1), spoke(l + 1, i),
                           outer(l + 1, i), spoke(l + 1, i + 1)});
    }
  }
  return HexMesh(std::move(vertices), std::move(cells));
}

}  // namespace ccsolid
