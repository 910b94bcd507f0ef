#pragma once

#include "wardrobe/mesh.hpp"

namespace wardrobe {

// Simple closed and open fixture meshes, all outward/CCW oriented.

TriMesh make_tetrahedron();
TriMesh make_octahedron(double radius = 1.0);
TriMesh make_icosahedron(double radius = 1.0);

/// Icosahedron refined `subdivisions` times with vertices projected onto the sphere.
TriMesh make_icosphere(int subdivisions, double radius = 1.0);

/// Axis-aligned closed box spanning [lo, hi].
TriMesh make_box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi);

/// Planar nx-by-ny vertex grid in the z=0 plane, lower corner at the origin,
/// normals along +z. UVs span [0,1]^2.
TriMesh make_grid(int nx, int ny, double spacing);

}  // namespace wardrobe
