#pragma once

#include "wardrobe/garment.hpp"
#include "wardrobe/laplacian.hpp"
#include "wardrobe/registration.hpp"

#include <random>

namespace fixtures {

using namespace wardrobe;

/// Two-joint sphere body of radius `radius`. Shape component 0 scales the
/// sphere radially (beta = 0.1 inflates it by 10%); the pose basis is zero.
BodyModel sphere_body(int subdivisions = 3, double radius = 0.3);

/// Cap of the sphere body above `height` (fraction of the radius), offset
/// outward by `offset`. Each cap vertex is associated with the body vertex
/// nearest to its position rotated by `indicator_angle` radians about x.
Garment sphere_cap(const BodyModel& body, double height, double offset, double indicator_angle);

/// Cut of a garment's extreme-|x| portion: the returned mesh keeps faces whose
/// vertices all lie within |x| <= cut.
struct TrimmedGarment {
  BodyModel model;
  Garment garment;
  TriMesh target;
  std::vector<Points> target_loops;  // paired with garment.boundary_loops
  double cut = 0.0;
};
/// T-shirt template with each sleeve shortened by 20% of its length.
TrimmedGarment trimmed_sleeve();

/// ||L (G - G_init)|| over non-boundary rows only.
double interior_laplacian_residual(const TriMesh& mesh, const Points& deformed, const Points& original);

/// Boundary vertices moved onto the mean of their matched target samples;
/// every other vertex left in place.
Points snap_boundary(const Points& vertices, const BoundaryCorrespondence& corr);

/// Random rotation from a seeded generator.
Eigen::Matrix3d random_rotation(std::mt19937_64& rng);

/// Random body pose with every joint angle at most `max_angle` radians.
PoseMatrix random_pose(std::mt19937_64& rng, int joints, double max_angle);

Eigen::VectorXd random_vector(std::mt19937_64& rng, int size, double scale);

}  // namespace fixtures
