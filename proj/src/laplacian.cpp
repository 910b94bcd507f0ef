#include "wardrobe/laplacian.hpp"

#include <vector>

namespace wardrobe {

SparseMatrix graph_laplacian(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> degree(n, 0.0);
  for (const auto& [a, b] : unique_edges(mesh)) {
    triplets.emplace_back(a, b, -1.0);
    triplets.emplace_back(b, a, -1.0);
    degree[a] += 1.0;
    degree[b] += 1.0;
  }
  for (int v = 0; v < n; ++v)
    if (degree[v] > 0.0) triplets.emplace_back(v, v, degree[v]);
  SparseMatrix L(n, n);
  L.setFromTriplets(triplets.begin(), triplets.end());
  return L;
}

SparseMatrix cotangent_laplacian(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(mesh.face_count()) * 12);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      // Angle at corner k is opposite edge (i, j).
      const int o = mesh.faces(f, k), i = mesh.faces(f, (k + 1) % 3), j = mesh.faces(f, (k + 2) % 3);
      const Eigen::Vector3d u = mesh.vertices.row(i) - mesh.vertices.row(o);
      const Eigen::Vector3d v = mesh.vertices.row(j) - mesh.vertices.row(o);
      const double cross = u.cross(v).norm();
      if (cross <= 0.0) continue;
      const double half_cot = 0.5 * u.dot(v) / cross;
      triplets.emplace_back(i, j, -half_cot);
      triplets.emplace_back(j, i, -half_cot);
      triplets.emplace_back(i, i, half_cot);
      triplets.emplace_back(j, j, half_cot);
    }
  }
  SparseMatrix L(n, n);
  L.setFromTriplets(triplets.begin(), triplets.end());
  return L;
}

Eigen::VectorXd lumped_mass(const TriMesh& mesh) {
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const double third = face_area(mesh, f) / 3.0;
    for (int k = 0; k < 3; ++k) mass[mesh.faces(f, k)] += third;
  }
  return mass;
}

}  // namespace wardrobe
