#include <map>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "ccsolid/bezier.hpp"
#include "ccsolid/meshgen.hpp"
#include "ccsolid/quadrature.hpp"
#include "ccsolid/spline.hpp"
#include "ccsolid/subdivision.hpp"
#include "support.hpp"

using namespace ccsolid;

namespace {

BezierVolume random_volume(unsigned seed, double jitter = 0.1) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  BezierVolume vol = BezierVolume::identity();
  for (auto& p : vol.points) p += Vec3(u(rng), u(rng), u(rng));
  return vol;
}

}  // namespace

TEST(Quadrature, ExactForPolynomialsUpToDegree2nMinus1) {
  for (int n = 1; n <= 8; ++n) {
    const QuadratureRule q = gauss_legendre(n);
    ASSERT_EQ(q.points.size(), static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += q.weights[i] * std::pow(q.points[i], k);
      EXPECT_NEAR(s, 1.0 / (k + 1), 1e-15) << "n=" << n << " k=" << k;
    }
  }
  EXPECT_THROW(gauss_legendre(0), Error);
}

TEST(Bezier, OneDimensionalIntegrals) {
  const QuadratureRule q = gauss_legendre(4);
  double stiff = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    const Bernstein1D b = bernstein(q.points[i]);
    stiff += q.weights[i] * b.derivative[0] * b.derivative[0];
    mass += q.weights[i] * b.value[0] * b.value[0];
  }
  EXPECT_NEAR(stiff, 9.0 / 5.0, 1e-15);
  EXPECT_NEAR(mass, 1.0 / 7.0, 1e-16);
}

TEST(Bezier, PartitionOfUnity) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const TrivariateBasis b = trivariate_basis(u(rng), u(rng), u(rng));
    double s = 0.0;
    Vec3 g = Vec3::Zero();
    for (int a = 0; a < 64; ++a) {
      s += b.value[a];
      g += b.gradient[a];
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_LT(g.norm(), 1e-13);
  }
}

TEST(Bezier, EvaluateMatchesDeCasteljau) {
  const BezierVolume vol = random_volume(3, 0.3);
  EXPECT_EQ(vol.evaluate(0, 0, 0), vol(0, 0, 0));
  EXPECT_EQ(vol.evaluate(1, 1, 1), vol(3, 3, 3));
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    EXPECT_LT((vol.evaluate(a, b, c) - oracle::de_casteljau(vol.points, a, b, c)).norm(), 1e-14);
  }
  EXPECT_THROW(vol.evaluate(1.5, 0, 0), Error);
  EXPECT_THROW(vol.jacobian(0, -0.1, 0), Error);
}

TEST(Bezier, JacobianOfIdentityAndScaledNets) {
  BezierVolume id = BezierVolume::identity();
  BezierVolume twice = id;
  for (auto& p : twice.points) p *= 2.0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    EXPECT_LT((id.jacobian(a, b, c) - Mat3::Identity()).norm(), 1e-14);
    EXPECT_LT((twice.jacobian(a, b, c) - 2.0 * Mat3::Identity()).norm(), 1e-14);
    EXPECT_LT((id.evaluate(a, b, c) - Vec3(a, b, c)).norm(), 1e-15);
  }
}

TEST(Bezier, JacobianMatchesFiniteDifferences) {
  const BezierVolume vol = random_volume(6, 0.2);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 t(u(rng), u(rng), u(rng));
    Mat3 fd;
    for (int d = 0; d < 3; ++d) {
      Vec3 lo = t, hi = t;
      lo[d] -= h;
      hi[d] += h;
      fd.col(d) = (vol.evaluate(hi.x(), hi.y(), hi.z()) - vol.evaluate(lo.x(), lo.y(), lo.z())) / (2 * h);
    }
    const Mat3 j = vol.jacobian(t.x(), t.y(), t.z());
    EXPECT_LT((j - fd).norm() / j.norm(), 1e-6);
  }
}

TEST(Spline, InteriorMaskRegularWeights) {
  // Centre vertex of a 2x2x2 lattice at the origin; the cell spanning [0,1]^3.
  const HexMesh m = make_lattice(2, 2, 2, Vec3(2, 2, 2), Vec3(-1, -1, -1));
  const Index centre = oracle::lattice_vertex(m, Vec3::Zero());
  for (Index c = 0; c < static_cast<Index>(m.num_cells()); ++c) {
    const int corner = m.local_corner(c, centre);
    ASSERT_GE(corner, 0);
    // Weights (8, 4, 4, 4, 2, 2, 2, 1) / 27 by corner distance from v1.
    Vec3 want = Vec3::Zero();
    for (int k = 0; k < 8; ++k) {
      const int d = hex::corner_distance(corner, k);
      const double w = d == 0 ? 8 : d == 1 ? 4 : d == 2 ? 2 : 1;
      want += w / 27.0 * m.vertex(m.cell(c)[k]);
    }
    EXPECT_LT((interior_bezier_point(m, c, corner) - want).norm(), 1e-15);
    // Unit cell with v1 at the origin: the point sits a third of the way along
    // the cell diagonal, i.e. at (1/3, 1/3, 1/3) up to the octant's signs.
    Vec3 diagonal = Vec3::Zero();
    for (Index v : m.cell(c)) diagonal += m.vertex(v) / 4.0;
    EXPECT_LT((interior_bezier_point(m, c, corner) - diagonal / 3.0).norm(), 1e-15);
  }
}

TEST(Spline, InteriorMaskOfCoincidentVertices) {
  const Vec3 p(0.3, -1.2, 4.0);
  // A valid mesh is needed for the valences; collapse one cell's corners afterwards.
  const HexMesh lattice = make_lattice(2, 2, 2);
  std::vector<Vec3> v = lattice.vertices();
  for (Index id : lattice.cell(0)) v[id] = p;
  const HexMesh m(v, lattice.cells());
  for (int corner = 0; corner < 8; ++corner) EXPECT_LT((interior_bezier_point(m, 0, corner) - p).norm(), 1e-14);
}

TEST(Spline, GlobalTableSize) {
  EXPECT_EQ(build_spline_model(make_lattice(2, 2, 2)).control_points.size(), 343u);
  EXPECT_EQ(build_spline_model(make_lattice(3, 2, 1)).control_points.size(), 10u * 7u * 4u);
  const HexMesh t = make_split_tetrahedron();
  const SplineModel s = build_spline_model(t);
  EXPECT_EQ(s.control_points.size(), t.num_vertices() + 2 * t.num_edges() + 4 * t.num_faces() + 8 * t.num_cells());
}

TEST(Spline, SharedFacesReferenceIdenticalEntries) {
  for (const HexMesh& m : {oracle::perturbed_lattice(3, 2, 2, 0.15, 8), make_fan_prism(5, 2)}) {
    const SplineModel model = build_spline_model(m);
    for (Index f = 0; f < static_cast<Index>(m.num_faces()); ++f) {
      const auto cells = m.face_cells(f);
      if (cells.size() != 2) continue;
      // Collect each cell's 16 boundary-layer indices on this face.
      std::array<std::vector<Index>, 2> layers;
      for (int side = 0; side < 2; ++side) {
        const Index c = cells[side];
        int local = -1;
        for (int l = 0; l < 6; ++l) {
          if (m.cell_face(c, l) == f) local = l;
        }
        ASSERT_GE(local, 0);
        const int axis = local / 2, fixed = (local % 2) * 3;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            std::array<int, 3> abc{};
            abc[axis] = fixed;
            abc[(axis + 1) % 3] = i;
            abc[(axis + 2) % 3] = j;
            layers[side].push_back(model.cells[c][bezier_index(abc[0], abc[1], abc[2])]);
          }
        }
        std::sort(layers[side].begin(), layers[side].end());
      }
      EXPECT_EQ(layers[0], layers[1]);
    }
  }
}

TEST(Spline, BoundaryFacePointIsTheInteriorPoint) {
  const HexMesh m = oracle::perturbed_lattice(2, 2, 2, 0.15, 10);
  const SplineModel model = build_spline_model(m);
  for (Index c = 0; c < static_cast<Index>(m.num_cells()); ++c) {
    for (int l = 0; l < 6; ++l) {
      if (!m.is_boundary_face(m.cell_face(c, l))) continue;
      const int axis = l / 2, side = l % 2;
      for (int corner : hex::kFaces[l]) {
        // Face point next to `corner`: index 0/3 on the face axis, 1/2 elsewhere.
        std::array<int, 3> abc{};
        for (int t = 0; t < 3; ++t) abc[t] = hex::kCornerBits[corner][t] ? 2 : 1;
        abc[axis] = side * 3;
        const Vec3 got = model.control_points[model.cells[c][bezier_index(abc[0], abc[1], abc[2])]];
        EXPECT_LT((got - interior_bezier_point(m, c, corner)).norm(), 1e-15);
      }
    }
  }
}

TEST(Spline, RegularCellsMatchBSplineConversion) {
  const int n = 4;
  const HexMesh base = make_lattice(n, n, n, Vec3(n, n, n));
  const HexMesh m = oracle::perturbed_lattice(n, n, n, 0.2, 12);
  const SplineModel model = build_spline_model(m);
  std::map<std::array<int, 3>, Index> node;
  for (Index v = 0; v < static_cast<Index>(base.num_vertices()); ++v) node[oracle::lattice_coords(base.vertex(v))] = v;
  int regular = 0;
  for (Index c = 0; c < static_cast<Index>(m.num_cells()); ++c) {
    const Cell& cell = base.cell(c);
    ASSERT_LT((base.vertex(cell[1]) - base.vertex(cell[0]) - Vec3(1, 0, 0)).norm(), 1e-15);
    ASSERT_LT((base.vertex(cell[3]) - base.vertex(cell[0]) - Vec3(0, 1, 0)).norm(), 1e-15);
    const auto o = oracle::lattice_coords(base.vertex(cell[0]));
    const bool expect_regular = o[0] >= 1 && o[0] <= n - 2 && o[1] >= 1 && o[1] <= n - 2 && o[2] >= 1 && o[2] <= n - 2;
    EXPECT_EQ(is_regular_cell(m, c), expect_regular);
    if (!expect_regular) continue;
    ++regular;
    std::array<std::array<std::array<Vec3, 4>, 4>, 4> p;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) p[i][j][k] = m.vertex(node.at({o[0] - 1 + i, o[1] - 1 + j, o[2] - 1 + k}));
      }
    }
    const auto want = oracle::bspline_to_bezier(p);
    const BezierVolume got = model.patch(c);
    for (int a = 0; a < 64; ++a) EXPECT_LT((got.points[a] - want[a]).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_EQ(regular, 8);
}

TEST(Spline, CornerPointsInterpolateRegularLimits) {
  const HexMesh m = oracle::perturbed_lattice(3, 3, 3, 0.2, 13);
  const SplineModel model = build_spline_model(m);
  for (Index v = 0; v < static_cast<Index>(m.num_vertices()); ++v) {
    if (m.is_boundary_vertex(v)) continue;
    // The vertex's corner point is table entry v.
    EXPECT_LT((model.control_points[v] - limit_point(m, v).position).norm(), 1e-14);
  }
}

TEST(Spline, TranslationInvariance) {
  const HexMesh m = make_fan_prism(5, 2);
  const Vec3 t(1.5, -2.0, 0.25);
  std::vector<Vec3> v = m.vertices();
  for (auto& p : v) p += t;
  const SplineModel a = build_spline_model(m);
  const SplineModel b = build_spline_model(HexMesh(v, m.cells()));
  ASSERT_EQ(a.control_points.size(), b.control_points.size());
  for (std::size_t i = 0; i < a.control_points.size(); ++i) {
    EXPECT_LT((b.control_points[i] - a.control_points[i] - t).norm(), 1e-13);
  }
}

TEST(Spline, RegularCentreOfUnitPatch) {
  const HexMesh m = make_lattice(3, 3, 3, Vec3(3, 3, 3));
  const SplineModel model = build_spline_model(m);
  for (Index c = 0; c < static_cast<Index>(m.num_cells()); ++c) {
    if (!is_regular_cell(m, c)) continue;
    EXPECT_LT((model.patch(c).evaluate(0.5, 0.5, 0.5) - Vec3(1.5, 1.5, 1.5)).norm(), 1e-14);
  }
}

TEST(Spline, ApproximationErrorVanishesOnRegularCells) {
  const HexMesh m = oracle::perturbed_lattice(4, 4, 4, 0.15, 14);
  const SplineModel model = build_spline_model(m);
  const ErrorStats d0 = approximation_error(m, model, 0);
  EXPECT_LE(d0.regular_interior_max(), 1e-12);
  const ErrorStats d2 = approximation_error(m, model, 2);
  EXPECT_LE(d2.regular_interior_max(), 1e-12);
  EXPECT_GT(d2.max, 0.0);
  EXPECT_THROW(approximation_error(m, model, 6), Error);
}

TEST(Spline, ExtraordinaryErrorIsPositive) {
  const HexMesh m = subdivide(make_fan_prism(5, 2), 1);
  const SplineModel model = build_spline_model(m);
  const ErrorStats s = approximation_error(m, model, 1);
  EXPECT_GT(s.max, 1e-6);
  EXPECT_GE(s.max, s.mean);
}

TEST(Spline, SerializationRoundTrip) {
  const SplineModel model = build_spline_model(oracle::perturbed_lattice(2, 1, 1, 0.2, 15));
  std::ostringstream out;
  write_spline_model(out, model);
  const SplineModel back = parse_spline_model(out.str());
  EXPECT_EQ(back.control_points, model.control_points);
  EXPECT_EQ(back.cells, model.cells);
  EXPECT_THROW(parse_spline_model("3 1\n0 0 0\n"), ParseError);
}

TEST(Spline, DegenerateCellsAreFlagged) {
  EXPECT_TRUE(degenerate_cells(build_spline_model(make_lattice(2, 2, 2))).empty());
  SplineModel flat = build_spline_model(make_lattice(1, 1, 1));
  for (auto& p : flat.control_points) p.z() = 0.0;
  EXPECT_EQ(degenerate_cells(flat).size(), 1u);
}
