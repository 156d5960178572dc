#pragma once

#include "ccsolid/hexmesh.hpp"

namespace ccsolid {

/// nx*ny*nz box of axis-aligned cells spanning [origin, origin + extent].
HexMesh make_lattice(int nx, int ny, int nz, const Vec3& extent = Vec3(1, 1, 1), const Vec3& origin = Vec3::Zero());

/// Regular tetrahedron split into four hexahedra, one per tetrahedron corner.
/// The tetrahedron centroid is an interior vertex of valence 4 whose incident
/// edges all have degree 3.
HexMesh make_split_tetrahedron();

/// A disk of `sectors` quads around a central vertex, extruded through
/// `layers` slabs. With layers >= 2 the axis vertices between slabs are
/// interior with valence sectors + 2 and axial edges of degree `sectors`.
HexMesh make_fan_prism(int sectors, int layers, double radius = 1.0, double height = 1.0);

}  // namespace ccsolid
