#pragma once

#include "wardrobe/mesh.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wardrobe {

/// Geodesic garment prior over body vertices.
struct GarmentPrior {
  std::vector<char> region;      // 1 for vertices in the garment region
  std::vector<double> cost_in;   // kappa * dist to the region boundary, inside the region
  std::vector<double> cost_out;  // kappa * dist to the region boundary, outside the region
};

/// Boundary = region vertices with at least one neighbor outside the region.
/// Throws Error when the region is empty or has no boundary.
GarmentPrior build_prior(const TriMesh& body, const std::vector<int>& region, double kappa = 1.0);

/// Per-vertex per-label prior costs. Prior p belongs to label prior_labels[p]:
/// labeling a vertex outside the region with that label costs cost_out, and
/// labeling a vertex inside the region with any other label costs cost_in.
Eigen::MatrixXd prior_cost_table(const std::vector<GarmentPrior>& priors, const std::vector<int>& prior_labels,
                                 int label_count);

struct MrfProblem {
  std::vector<Edge> edges;      // vertex graph, unit weights
  Eigen::MatrixXd unary;        // n x L
  Eigen::MatrixXd prior;        // n x L, or empty for none
  double lambda_prior = 1.0;
  double lambda_pair = 0.5;

  [[nodiscard]] int vertex_count() const { return static_cast<int>(unary.rows()); }
  [[nodiscard]] int label_count() const { return static_cast<int>(unary.cols()); }
  void validate() const;
};

double mrf_energy(const MrfProblem& problem, const std::vector<int>& labels);

struct MrfSolution {
  std::vector<int> labels;
  double energy = 0.0;
  int best_start = 0;
  std::vector<double> start_energies;  // energy of each start's result, in start order
};

/// Iterated conditional modes from several deterministic starts (one uniform
/// labeling per label, unary argmin, prior argmin, combined argmin). Each ICM
/// fixed point is refined by whole-component relabeling and alpha-expansion
/// (min-cut) moves, alternating with ICM until nothing improves. The lowest final energy wins, earlier starts on ties.
MrfSolution solve_mrf(const MrfProblem& problem);

/// Brute-force minimum over all labelings; for small test problems only.
MrfSolution solve_mrf_exhaustive(const MrfProblem& problem);

struct LabelTransfer {
  std::vector<int> labels;
  std::vector<int> flagged;  // scan vertices farther than the flag distance from the body
};

/// Each scan vertex takes the label of the body vertex nearest to its closest
/// body-surface point.
LabelTransfer transfer_labels(const TriMesh& body, const std::vector<int>& body_labels, const TriMesh& scan,
                              double flag_distance = 0.1);

}  // namespace wardrobe
