#include "ccsolid/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <Eigen/LU>

#include "ccsolid/subdivision.hpp"
#include "text_io.hpp"

namespace ccsolid {

namespace {

int flip(int corner, int axis) {
  auto bits = hex::kCornerBits[corner];
  bits[axis] ^= 1;
  return hex::corner_at(bits[0], bits[1], bits[2]);
}

void require_valid(const HexMesh& mesh) {
  const ValidationReport report = validate(mesh);
  if (!report.ok()) throw Error("invalid mesh: " + report.findings.front().message);
}

}  // namespace

BezierVolume SplineModel::patch(Index c) const {
  BezierVolume vol;
  for (int i = 0; i < 64; ++i) vol.points[i] = control_points[cells[c][i]];
  return vol;
}

Vec3 interior_bezier_point(const HexMesh& mesh, Index cell, int corner) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= mesh.num_cells()) {
    throw Error("cell " + std::to_string(cell) + " out of range");
  }
  if (corner < 0 || corner > 7) throw Error("cell corner " + std::to_string(corner) + " out of range");
  const Cell& verts = mesh.cell(cell);
  const Index v1 = verts[corner];
  double weight = 2.0 * (mesh.valence(v1) - 2);
  Vec3 sum = weight * mesh.vertex(v1);
  for (int j = 0; j < 8; ++j) {
    double w = 0.0;
    switch (hex::corner_distance(corner, j)) {
      case 0: continue;
      case 1: w = mesh.edge_degree(mesh.cell_edge(cell, hex::edge_between(corner, j))); break;
      case 2: w = 2.0; break;
      case 3: w = 1.0; break;
    }
    sum += w * mesh.vertex(verts[j]);
    weight += w;
  }
  return sum / weight;
}

Index spline_slot(const HexMesh& mesh, Index c, int a, int b, int cc) {
  const auto nv = static_cast<Index>(mesh.num_vertices());
  const auto ne = static_cast<Index>(mesh.num_edges());
  const auto nf = static_cast<Index>(mesh.num_faces());
  const std::array<int, 3> idx{a, b, cc};
  std::array<int, 3> bits{};
  int inner = 0;
  int inner_axis = -1, outer_axis = -1;
  for (int t = 0; t < 3; ++t) {
    bits[t] = idx[t] >= 2;
    if (idx[t] == 1 || idx[t] == 2) {
      ++inner;
      inner_axis = t;
    } else {
      outer_axis = t;
    }
  }
  const int k = hex::corner_at(bits[0], bits[1], bits[2]);
  const Index v = mesh.cell(c)[k];
  switch (inner) {
    case 0: return v;
    case 1: {
      const Index e = mesh.cell_edge(c, hex::edge_between(k, flip(k, inner_axis)));
      return nv + 2 * e + (mesh.edge(e)[0] == v ? 0 : 1);
    }
    case 2: {
      const Index f = mesh.cell_face(c, 2 * outer_axis + bits[outer_axis]);
      const auto& cyc = mesh.face(f);
      const auto pos = static_cast<Index>(std::find(cyc.begin(), cyc.end(), v) - cyc.begin());
      return nv + 2 * ne + 4 * f + pos;
    }
    default: return nv + 2 * ne + 4 * nf + 8 * c + k;
  }
}

SplineModel build_spline_model(const HexMesh& mesh) {
  require_valid(mesh);
  const auto nv = static_cast<Index>(mesh.num_vertices());
  const auto ne = static_cast<Index>(mesh.num_edges());
  const auto nf = static_cast<Index>(mesh.num_faces());
  const auto nc = static_cast<Index>(mesh.num_cells());

  SplineModel model;
  model.control_points.resize(static_cast<std::size_t>(nv + 2 * ne + 4 * nf + 8 * nc));
  Vec3* interior = model.control_points.data() + nv + 2 * ne + 4 * nf;
  for (Index c = 0; c < nc; ++c) {
    for (int k = 0; k < 8; ++k) interior[8 * c + k] = interior_bezier_point(mesh, c, k);
  }
  const auto average = [&](std::span<const Index> cells, Index v) {
    Vec3 sum = Vec3::Zero();
    for (Index c : cells) sum += interior[8 * c + mesh.local_corner(c, v)];
    return (sum / static_cast<double>(cells.size())).eval();
  };
  for (Index v = 0; v < nv; ++v) model.control_points[v] = average(mesh.vertex_cells(v), v);
  for (Index e = 0; e < ne; ++e) {
    for (int s = 0; s < 2; ++s) model.control_points[nv + 2 * e + s] = average(mesh.edge_cells(e), mesh.edge(e)[s]);
  }
  for (Index f = 0; f < nf; ++f) {
    for (int p = 0; p < 4; ++p) {
      model.control_points[nv + 2 * ne + 4 * f + p] = average(mesh.face_cells(f), mesh.face(f)[p]);
    }
  }

  model.cells.resize(static_cast<std::size_t>(nc));
  for (Index c = 0; c < nc; ++c) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int cc = 0; cc < 4; ++cc) model.cells[c][bezier_index(a, b, cc)] = spline_slot(mesh, c, a, b, cc);
      }
    }
  }
  return model;
}

bool is_regular_cell(const HexMesh& mesh, Index c) {
  for (Index v : mesh.cell(c)) {
    if (mesh.is_boundary_vertex(v) || mesh.valence(v) != 6) return false;
    if (mesh.vertex_faces(v).size() != 12 || mesh.vertex_cells(v).size() != 8) return false;
    for (Index e : mesh.vertex_edges(v)) {
      if (mesh.edge_degree(e) != 4) return false;
    }
  }
  return true;
}

std::vector<Index> degenerate_cells(const SplineModel& model) {
  std::vector<Index> out;
  for (Index c = 0; c < static_cast<Index>(model.num_cells()); ++c) {
    const BezierVolume vol = model.patch(c);
    bool bad = vol.jacobian(0.5, 0.5, 0.5).determinant() <= 0.0;
    for (int i = 0; i < 8 && !bad; ++i) {
      const auto& b = hex::kCornerBits[i];
      bad = vol.jacobian(0.25 + 0.5 * b[0], 0.25 + 0.5 * b[1], 0.25 + 0.5 * b[2]).determinant() <= 0.0;
    }
    if (bad) out.push_back(c);
  }
  return out;
}

double ErrorStats::regular_interior_max() const {
  double m = 0.0;
  for (const auto& s : samples) {
    if (s.interior && s.regular) m = std::max(m, s.distance);
  }
  return m;
}

ErrorStats approximation_error(const HexMesh& mesh, const SplineModel& model, int depth) {
  if (depth < 0) throw Error("sampling depth must be non-negative");
  if (model.num_cells() != mesh.num_cells()) throw Error("spline model does not match the mesh");
  if (static_cast<double>(mesh.num_cells()) * std::pow(8.0, depth) > 1e7) {
    throw Error("sampling depth " + std::to_string(depth) + " exceeds the 1e7 fine-cell budget");
  }

  struct Track {
    Index root;
    std::array<int, 3> origin;
  };
  std::vector<Track> tracks(mesh.num_cells());
  for (Index c = 0; c < static_cast<Index>(mesh.num_cells()); ++c) tracks[c] = {c, {0, 0, 0}};
  HexMesh fine = mesh;
  for (int level = 0; level < depth; ++level) {
    Subdivision sub = subdivide(fine);
    std::vector<Track> next(sub.mesh.num_cells());
    for (std::size_t i = 0; i < next.size(); ++i) {
      const auto& child = sub.provenance.cells[i];
      const Track& parent = tracks[child.parent];
      const auto& b = hex::kCornerBits[child.octant];
      next[i] = {parent.root, {2 * parent.origin[0] + b[0], 2 * parent.origin[1] + b[1], 2 * parent.origin[2] + b[2]}};
    }
    tracks = std::move(next);
    fine = std::move(sub.mesh);
  }

  std::vector<char> regular_root(mesh.num_cells());
  for (Index c = 0; c < static_cast<Index>(mesh.num_cells()); ++c) regular_root[c] = is_regular_cell(mesh, c);

  ErrorStats stats;
  stats.depth = depth;
  const double scale = 1.0 / static_cast<double>(1 << depth);
  std::vector<Index> slot(fine.num_vertices(), -1);
  for (Index c = 0; c < static_cast<Index>(fine.num_cells()); ++c) {
    const Track& t = tracks[c];
    for (int j = 0; j < 8; ++j) {
      const Index v = fine.cell(c)[j];
      const auto& b = hex::kCornerBits[j];
      const Vec3 param((t.origin[0] + b[0]) * scale, (t.origin[1] + b[1]) * scale, (t.origin[2] + b[2]) * scale);
      if (slot[v] < 0) {
        slot[v] = static_cast<Index>(stats.samples.size());
        stats.samples.push_back({v, t.root, param, 0.0, !fine.is_boundary_vertex(v), bool(regular_root[t.root])});
      } else if (regular_root[t.root] && !stats.samples[slot[v]].regular) {
        auto& s = stats.samples[slot[v]];
        s.cell = t.root;
        s.parameter = param;
        s.regular = true;
      }
    }
  }

  std::vector<BezierVolume> patches;
  patches.reserve(model.num_cells());
  for (Index c = 0; c < static_cast<Index>(model.num_cells()); ++c) patches.push_back(model.patch(c));
  double total = 0.0;
  for (auto& s : stats.samples) {
    const Vec3 limit = limit_point(fine, s.vertex).position;
    const Vec3 spline = patches[s.cell].evaluate(s.parameter.x(), s.parameter.y(), s.parameter.z());
    s.distance = (limit - spline).norm();
    stats.max = std::max(stats.max, s.distance);
    total += s.distance;
  }
  if (!stats.samples.empty()) stats.mean = total / static_cast<double>(stats.samples.size());
  return stats;
}

SplineModel parse_spline_model(std::string_view text) {
  using detail::parse_number;
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError("empty spline model file", 0);
  const auto& header = lines[0];
  if (header.tokens.size() != 2) throw ParseError("expected header 'ncp ncell'", header.number);
  const auto ncp = parse_number<long long>(header.tokens[0], header.number);
  const auto ncell = parse_number<long long>(header.tokens[1], header.number);
  if (ncp < 0 || ncell < 0) throw ParseError("negative count", header.number);
  if (static_cast<long long>(lines.size()) - 1 != ncp + ncell) {
    throw ParseError("header announces " + std::to_string(ncp + ncell) + " data lines but the file has " +
                         std::to_string(lines.size() - 1),
                     lines.back().number);
  }
  SplineModel model;
  model.control_points.resize(static_cast<std::size_t>(ncp));
  for (long long i = 0; i < ncp; ++i) {
    const auto& line = lines[1 + i];
    if (line.tokens.size() != 3) throw ParseError("expected 'x y z'", line.number);
    for (int k = 0; k < 3; ++k) model.control_points[i][k] = parse_number<double>(line.tokens[k], line.number);
  }
  model.cells.resize(static_cast<std::size_t>(ncell));
  for (long long i = 0; i < ncell; ++i) {
    const auto& line = lines[1 + ncp + i];
    if (line.tokens.size() != 64) throw ParseError("expected 64 control-point indices", line.number);
    for (int k = 0; k < 64; ++k) {
      const auto id = parse_number<long long>(line.tokens[k], line.number);
      if (id < 0 || id >= ncp) throw ParseError("control-point index " + std::to_string(id) + " out of range", line.number);
      model.cells[i][k] = static_cast<Index>(id);
    }
  }
  return model;
}

void write_spline_model(std::ostream& out, const SplineModel& model) {
  out << model.control_points.size() << ' ' << model.cells.size() << '\n';
  char buf[96];
  for (const auto& p : model.control_points) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const auto& c : model.cells) {
    for (int k = 0; k < 64; ++k) out << c[k] << (k == 63 ? '\n' : ' ');
  }
}

void write_spline_model(const std::string& path, const SplineModel& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write spline model '" + path + "'");
  write_spline_model(out, model);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace ccsolid
