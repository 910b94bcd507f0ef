#pragma once

#include "wardrobe/mesh.hpp"

#include <Eigen/SparseCore>

namespace wardrobe {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Uniform graph Laplacian L = D - A over mesh edges. Row sums are exactly zero.
SparseMatrix graph_laplacian(const TriMesh& mesh);

/// Positive semi-definite cotangent stiffness matrix:
/// L_ij = -(cot a_ij + cot b_ij) / 2, L_ii = -sum_j L_ij.
SparseMatrix cotangent_laplacian(const TriMesh& mesh);

/// Barycentric lumped mass: one third of the incident face areas per vertex.
Eigen::VectorXd lumped_mass(const TriMesh& mesh);

}  // namespace wardrobe
