#pragma once

#include "wardrobe/mesh.hpp"

#include <limits>
#include <span>
#include <vector>

namespace wardrobe {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Approximate geodesic distance to the nearest source vertex by the heat
/// method: one backward-Euler heat step with t = h^2 (h = mean edge length),
/// normalized negative gradient field, then a cotangent Poisson solve.
///
/// Distances are exactly zero on sources and clamped to be nonnegative.
/// Vertices in connected components without a source receive kUnreachable.
std::vector<double> geodesic_distance(const TriMesh& mesh, std::span<const int> sources);

}  // namespace wardrobe
