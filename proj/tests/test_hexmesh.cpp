#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ccsolid/hexmesh.hpp"
#include "ccsolid/meshgen.hpp"
#include "support.hpp"

using namespace ccsolid;

namespace {

const char* kCube =
    "# unit cube\n"
    "8 1\n"
    "0 0 0\n1 0 0\n1 1 0\n0 1 0\n"
    "0 0 1\n1 0 1\n1 1 1\n0 1 1\n"
    "0 1 2 3 4 5 6 7\n";

}  // namespace

TEST(HexMesh, CubeCombinatorics) {
  const HexMesh m = parse_mesh(kCube);
  EXPECT_EQ(m.num_vertices(), 8u);
  EXPECT_EQ(m.num_cells(), 1u);
  EXPECT_EQ(m.num_edges(), 12u);
  EXPECT_EQ(m.num_faces(), 6u);
  for (Index f = 0; f < 6; ++f) EXPECT_TRUE(m.is_boundary_face(f));
}

TEST(HexMesh, LatticeCounts) {
  const HexMesh m = make_lattice(2, 2, 2);
  EXPECT_EQ(m.num_vertices(), 27u);
  EXPECT_EQ(m.num_cells(), 8u);
  EXPECT_EQ(m.num_edges(), 54u);
  EXPECT_EQ(m.num_faces(), 36u);
}

TEST(HexMesh, ParseErrorsCarryLineNumbers) {
  const std::string bad_index =
      "8 1\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n0 1 2 3 4 5 6 99\n";
  try {
    parse_mesh(bad_index);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 10);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
  try {
    parse_mesh("# comment\n8 1\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n0 1 2 3 4 5 6 6\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 11);
  }
  try {
    parse_mesh("8 1\n0 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_mesh(""), ParseError);
  EXPECT_THROW(parse_mesh("8 1\n0 0 0\n"), ParseError);
  EXPECT_THROW(parse_mesh("1 0\n0 0 zz\n"), ParseError);
}

TEST(HexMesh, RoundTripIsExact) {
  const HexMesh m = oracle::perturbed_lattice(2, 2, 2, 0.2, 7);
  const HexMesh back = parse_mesh(format_mesh(m));
  EXPECT_EQ(back.vertices(), m.vertices());
  EXPECT_EQ(back.cells(), m.cells());
}

TEST(HexMesh, ValidateLatticeCentre) {
  const HexMesh m = make_lattice(2, 2, 2, Vec3(2, 2, 2));
  const ValidationReport r = validate(m);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.interior_vertices, 1u);
  const VertexStar s = vertex_star(m, oracle::lattice_vertex(m, Vec3(1, 1, 1)));
  EXPECT_TRUE(s.interior);
  EXPECT_EQ(s.valence(), 6);
  EXPECT_EQ(s.faces.size(), 12u);
  EXPECT_EQ(s.cells.size(), 8u);
  EXPECT_EQ(s.size(), 27);
  for (int m_j : s.edge_degrees) EXPECT_EQ(m_j, 4);
}

TEST(HexMesh, SingleCubeValidatesVacuously) {
  const HexMesh m = parse_mesh(kCube);
  const ValidationReport r = validate(m);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.interior_vertices, 0u);
  const VertexStar s = vertex_star(m, 0);
  EXPECT_EQ(s.valence(), 3);
  EXPECT_FALSE(s.interior);
}

TEST(HexMesh, CubesSharingOnlyAnEdgeAreFlagged) {
  std::vector<Vec3> v;
  for (int k = 0; k < 2; ++k) {
    v.emplace_back(0, 0, k);
    v.emplace_back(1, 0, k);
    v.emplace_back(1, 1, k);
    v.emplace_back(0, 1, k);
  }
  // Second cube touches the first along the edge x = 1, y = 1.
  for (int k = 0; k < 2; ++k) {
    v.emplace_back(2, 1, k);
    v.emplace_back(2, 2, k);
    v.emplace_back(1, 2, k);
  }
  const std::vector<Cell> cells{{0, 1, 2, 3, 4, 5, 6, 7}, {2, 8, 9, 10, 6, 11, 12, 13}};
  const ValidationReport r = validate(HexMesh(v, cells));
  EXPECT_FALSE(r.ok());
}

TEST(HexMesh, NonConformingCellsAreFlagged) {
  // Two cells sharing three vertices of a face but not the fourth.
  std::vector<Vec3> v;
  for (int k = 0; k < 2; ++k) {
    v.emplace_back(0, 0, k);
    v.emplace_back(1, 0, k);
    v.emplace_back(1, 1, k);
    v.emplace_back(0, 1, k);
  }
  for (int k = 0; k < 2; ++k) {
    v.emplace_back(2, 0, k);
    v.emplace_back(2, 1, k);
  }
  v.emplace_back(1.0, 1.0, 1.2);
  const std::vector<Cell> cells{{0, 1, 2, 3, 4, 5, 6, 7}, {1, 8, 9, 2, 5, 10, 11, 12}};
  EXPECT_FALSE(validate(HexMesh(v, cells)).ok());
}

TEST(HexMesh, ExtraordinaryEdgeDegree) {
  const HexMesh m = make_split_tetrahedron();
  const Index centre = static_cast<Index>(m.num_vertices()) - 1;
  const VertexStar s = vertex_star(m, centre);
  EXPECT_TRUE(s.interior);
  EXPECT_EQ(s.valence(), 4);
  for (int m_j : s.edge_degrees) EXPECT_EQ(m_j, 3);
  EXPECT_TRUE(s.satisfies_euler_counts());
}

TEST(HexMesh, LemmaOneOnEveryInteriorVertex) {
  for (const HexMesh& m : {make_lattice(3, 3, 3), make_split_tetrahedron(), make_fan_prism(5, 3), make_fan_prism(3, 2)}) {
    const ValidationReport r = validate(m);
    EXPECT_TRUE(r.ok());
    for (Index v = 0; v < static_cast<Index>(m.num_vertices()); ++v) {
      const VertexStar s = vertex_star(m, v);
      if (!s.interior) continue;
      EXPECT_EQ(static_cast<int>(s.faces.size()), 3 * (s.valence() - 2));
      EXPECT_EQ(static_cast<int>(s.cells.size()), 2 * (s.valence() - 2));
      EXPECT_EQ(s.size(), 6 * s.valence() - 9);
    }
  }
}

TEST(HexMesh, DerivedSetsIgnoreCellOrder) {
  const HexMesh m = oracle::perturbed_lattice(3, 2, 2, 0.1, 3);
  std::vector<Cell> shuffled = m.cells();
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(11));
  const HexMesh s(m.vertices(), shuffled);
  ASSERT_EQ(s.num_edges(), m.num_edges());
  ASSERT_EQ(s.num_faces(), m.num_faces());
  for (Index e = 0; e < static_cast<Index>(m.num_edges()); ++e) EXPECT_EQ(s.edge(e), m.edge(e));
  for (Index f = 0; f < static_cast<Index>(m.num_faces()); ++f) {
    auto a = s.face(f), b = m.face(f);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(HexMesh, RejectsInvalidCells) {
  EXPECT_THROW(HexMesh({Vec3::Zero()}, {Cell{0, 0, 0, 0, 0, 0, 0, 0}}), Error);
  EXPECT_THROW(vertex_star(make_lattice(1, 1, 1), 8), Error);
}
