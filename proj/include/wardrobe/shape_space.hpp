#pragma once

#include "wardrobe/mesh.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wardrobe {

/// PCA over unposed garment vertices, flattened x,y,z per vertex.
struct PcaShapeSpace {
  std::string garment_class;
  Points mean;
  Eigen::MatrixXd basis;  // 3m x n_c, orthonormal columns
  Eigen::VectorXd singular_values;
  double residual_cap = 0.01;

  [[nodiscard]] int component_count() const { return static_cast<int>(basis.cols()); }
  [[nodiscard]] int vertex_count() const { return static_cast<int>(mean.rows()); }
};

struct PcaFitResult {
  PcaShapeSpace space;
  std::string warning;  // set when the requested component count was clamped
};

/// Mean-centered SVD of the stacked samples. Requests above samples - 1
/// components are clamped (with a warning). Each basis column's
/// largest-magnitude entry is positive.
PcaFitResult fit_pca(const std::vector<Points>& samples, int components = 35, const std::string& garment_class = "");

struct Encoding {
  Eigen::VectorXd z;
  Points residual;   // D^hf, each row capped at residual_cap
  int clipped = 0;   // rows whose residual was shortened
};

Encoding encode(const PcaShapeSpace& space, const Points& garment);

/// mean + B z, plus the residual when given.
Points decode(const PcaShapeSpace& space, const Eigen::VectorXd& z, const Points& residual = Points());

}  // namespace wardrobe
