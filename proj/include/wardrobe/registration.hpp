#pragma once

#include "wardrobe/body_model.hpp"
#include "wardrobe/bvh.hpp"
#include "wardrobe/garment.hpp"
#include "wardrobe/laplacian.hpp"

#include <string>
#include <vector>

namespace wardrobe {

/// Target boundary samples q_i paired with template vertex ids j_i.
struct BoundaryCorrespondence {
  Points scan_points;
  std::vector<int> template_indices;
  double weight = 10.0;

  [[nodiscard]] int size() const { return static_cast<int>(template_indices.size()); }
};

struct RegistrationConfig {
  double boundary_weight = 10.0;
  double data_weight = 1.0;
  double laplacian_weight = 0.5;
  double interp_weight = 25.0;
  double unpose_weight = 0.1;
  int max_iterations = 100;
  double tolerance = 1e-6;      // relative energy change
  double energy_floor = 1e-12;  // denominator floor for the relative change
  int max_backtracks = 30;

  void validate() const;
};

/// For each target loop sample, the nearest vertex of the paired template
/// loop (template loop i pairs with target loop i). Ties go to the lowest id.
BoundaryCorrespondence match_boundaries(const Points& template_vertices, const std::vector<Loop>& template_loops,
                                        const std::vector<Points>& target_loops, double weight);

/// Least-squares solution of [L; w_b S] G = [L G_init; w_b q] through the
/// normal equations. Throws Error("... underconstrained") when some connected
/// component carries no boundary constraint.
Points laplacian_init(const Points& template_init, const SparseMatrix& laplacian, const BoundaryCorrespondence& corr);

/// Sum of the piecewise distance: w |x - y| for vertices strictly inside the
/// body, 0 otherwise.
struct InterpenetrationResult {
  double energy = 0.0;
  int inside_count = 0;
};
InterpenetrationResult interpenetration_energy(const Points& garment_vertices, const SurfaceBVH& body,
                                               double w = 25.0);

/// sum_k (d(v_k, S) - d(v0_k, S0))^2 with unsigned point-to-surface distances.
double unpose_energy(const Points& garment_now, const SurfaceBVH& body_now, const Points& garment_unposed,
                     const SurfaceBVH& body_unposed);

/// Body fit used to drive registration: parameters plus skin displacements.
struct BodyFit {
  BodyParams params;
  Points skin_displacements;  // n x 3 or empty
};

struct EnergyTerms {
  double data = 0.0;
  double laplacian = 0.0;
  double interp = 0.0;
  double unpose = 0.0;
  double total = 0.0;
  int inside_count = 0;
};

struct IterationRecord {
  int iteration = 0;
  EnergyTerms energy;
  double step = 0.0;
};

struct RegistrationResult {
  Points vertices;       // registered, posed (target space)
  Points displacements;  // D^g against the fit's beta
  Points initial;        // after laplacian_init
  bool converged = false;
  std::string warning;
  EnergyTerms initial_energy;
  std::vector<IterationRecord> iterations;
  double boundary_residual = 0.0;  // mean target-boundary-to-template-boundary distance after init
};

/// Faces of `target` whose three vertices carry `label`, as a standalone mesh.
TriMesh labeled_submesh(const TriMesh& target, const std::vector<int>& vertex_labels, int label);

/// Boundary loops of a mesh as point sequences.
std::vector<Points> loop_points(const TriMesh& mesh, const std::vector<Loop>& loops);

/// Reorders `target_loops` so entry i is the loop whose centroid is nearest to
/// the centroid of template loop i. Throws on count mismatch.
std::vector<Points> pair_loops_by_centroid(const Points& template_vertices, const std::vector<Loop>& template_loops,
                                           const std::vector<Points>& target_loops);

/// Mean distance from each target loop sample to the polyline of its paired template loop.
double boundary_residual(const Points& template_vertices, const std::vector<Loop>& template_loops,
                         const std::vector<Points>& target_loops);

/// Full pipeline: pose the template with the fit, match boundaries, solve the
/// Laplacian initialization, then refine the data + Laplacian +
/// interpenetration + unpose energy by preconditioned descent with
/// backtracking. `target_loops` must be paired with template.boundary_loops.
RegistrationResult register_garment(const BodyModel& model, const Garment& garment, const BodyFit& fit,
                                    const TriMesh& target, const std::vector<int>& target_labels, int label,
                                    const std::vector<Points>& target_loops, const RegistrationConfig& config = {});

}  // namespace wardrobe
