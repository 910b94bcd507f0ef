#include "wardrobe/registration.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wardrobe {
namespace {

double point_segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

Eigen::Vector3d centroid(const Points& pts) { return pts.colwise().mean().transpose(); }

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Per-vertex unposing map v0 = R_i^-1 v + c_i for a fixed fit.
struct UnposeMap {
  std::vector<Eigen::Matrix3d> inverse;
  Points offset;

  Points apply(const Points& posed) const {
    Points out(posed.rows(), 3);
    for (Eigen::Index i = 0; i < posed.rows(); ++i) {
      out.row(i) = (inverse[i] * posed.row(i).transpose() + offset.row(i).transpose()).transpose();
    }
    return out;
  }
};

UnposeMap make_unpose_map(const BodyModel& model, const Garment& garment, const BodyParams& params) {
  const auto G = skinning_transforms(model, params.beta, params.theta);
  const auto A = blend_transforms(G, garment_weights(model, garment));
  const Points pose_off = pose_offsets(model, params.theta);
  UnposeMap map;
  map.inverse.resize(A.size());
  map.offset.resize(static_cast<Eigen::Index>(A.size()), 3);
  for (size_t i = 0; i < A.size(); ++i) {
    const Eigen::Matrix3d R = A[i].leftCols<3>();
    if (!(R.determinant() > 1e-8)) {
      throw Error("register_garment: blended transform of garment vertex " + std::to_string(i) + " is singular");
    }
    map.inverse[i] = R.inverse();
    const Eigen::Vector3d c = -map.inverse[i] * (A[i].col(3) + params.trans) -
                              pose_off.row(garment.indicator[i]).transpose();
    map.offset.row(static_cast<Eigen::Index>(i)) = c.transpose();
  }
  return map;
}

struct Objective {
  const RegistrationConfig& config;
  const SparseMatrix& L;
  const Points& reference;  // G_init for the Laplacian term
  const SurfaceBVH& target;
  const SurfaceBVH& body;
  const SurfaceBVH& body_rest;
  const UnposeMap& unpose;

  EnergyTerms evaluate(const Points& G, Points* gradient) const {
    EnergyTerms e;
    const Eigen::Index m = G.rows();
    if (gradient) *gradient = Points::Zero(m, 3);

    const Points lap_residual = L * (G - reference);
    e.laplacian = config.laplacian_weight * lap_residual.squaredNorm();
    if (gradient) *gradient += 2.0 * config.laplacian_weight * (L.transpose() * lap_residual);

    const Points rest = config.unpose_weight > 0.0 ? unpose.apply(G) : Points();
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Vector3d v = G.row(i).transpose();
      if (config.data_weight > 0.0) {
        const Eigen::Vector3d y = target.closest_point(v).point;
        e.data += config.data_weight * (v - y).squaredNorm();
        if (gradient) gradient->row(i) += 2.0 * config.data_weight * (v - y).transpose();
      }
      const SurfacePoint s = body.closest_point(v);
      if (s.inside) {
        e.interp += config.interp_weight * s.distance;
        ++e.inside_count;
        if (gradient && s.distance > 0.0) {
          gradient->row(i) += config.interp_weight * ((v - s.point) / s.distance).transpose();
        }
      }
      if (config.unpose_weight > 0.0) {
        const Eigen::Vector3d v0 = rest.row(i).transpose();
        const SurfacePoint s0 = body_rest.closest_point(v0);
        const double r = s.distance - s0.distance;
        e.unpose += config.unpose_weight * r * r;
        if (gradient) {
          Eigen::Vector3d d = Eigen::Vector3d::Zero();
          if (s.distance > 0.0) d += (v - s.point) / s.distance;
          if (s0.distance > 0.0) d -= unpose.inverse[i].transpose() * ((v0 - s0.point) / s0.distance);
          gradient->row(i) += 2.0 * config.unpose_weight * r * d.transpose();
        }
      }
    }
    e.total = e.data + e.laplacian + e.interp + e.unpose;
    return e;
  }
};

}  // namespace

void RegistrationConfig::validate() const {
  if (boundary_weight < 0 || data_weight < 0 || laplacian_weight < 0 || interp_weight < 0 || unpose_weight < 0) {
    throw Error("registration config: weights must be nonnegative");
  }
  if (max_iterations < 1) throw Error("registration config: max_iterations must be >= 1");
  if (!(tolerance >= 0.0) || !(energy_floor > 0.0)) throw Error("registration config: tolerance must be nonnegative and energy_floor positive");
  if (max_backtracks < 1) throw Error("registration config: max_backtracks must be >= 1");
}

BoundaryCorrespondence match_boundaries(const Points& template_vertices, const std::vector<Loop>& template_loops,
                                        const std::vector<Points>& target_loops, double weight) {
  if (template_loops.size() != target_loops.size()) {
    throw Error("match_boundaries: template has " + std::to_string(template_loops.size()) +
                " boundary loops, target has " + std::to_string(target_loops.size()));
  }
  BoundaryCorrespondence corr;
  corr.weight = weight;
  Eigen::Index total = 0;
  for (const auto& loop : target_loops) total += loop.rows();
  corr.scan_points.resize(total, 3);
  Eigen::Index row = 0;
  for (size_t l = 0; l < target_loops.size(); ++l) {
    const Loop& candidates = template_loops[l];
    if (candidates.empty()) throw Error("match_boundaries: empty template loop");
    for (Eigen::Index s = 0; s < target_loops[l].rows(); ++s) {
      const Eigen::Vector3d q = target_loops[l].row(s).transpose();
      int best = -1;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int v : candidates) {
        const double d2 = (template_vertices.row(v).transpose() - q).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && v < best)) {
          best_d2 = d2;
          best = v;
        }
      }
      corr.scan_points.row(row++) = q.transpose();
      corr.template_indices.push_back(best);
    }
  }
  return corr;
}

Points laplacian_init(const Points& template_init, const SparseMatrix& laplacian, const BoundaryCorrespondence& corr) {
  const auto m = static_cast<int>(template_init.rows());
  if (laplacian.rows() != m || laplacian.cols() != m) throw Error("laplacian_init: Laplacian size mismatch");
  if (corr.scan_points.rows() != corr.size()) throw Error("laplacian_init: correspondence size mismatch");
  if (!(corr.weight > 0.0)) throw Error("laplacian_init: boundary weight must be positive (underconstrained)");

  // Each connected piece of the Laplacian graph needs at least one constraint.
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  for (int col = 0; col < laplacian.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(laplacian, col); it; ++it)
      if (it.row() != it.col() && it.value() != 0.0)
        parent[find_root(parent, static_cast<int>(it.row()))] = find_root(parent, static_cast<int>(it.col()));
  std::vector<char> constrained(m, 0);
  for (int j : corr.template_indices) {
    if (j < 0 || j >= m) throw Error("laplacian_init: correspondence index " + std::to_string(j) + " out of range");
    constrained[find_root(parent, j)] = 1;
  }
  for (int v = 0; v < m; ++v) {
    if (!constrained[find_root(parent, v)]) {
      throw Error("laplacian_init: system is underconstrained (vertex " + std::to_string(v) +
                  " has no boundary constraint in its component)");
    }
  }

  const double w2 = corr.weight * corr.weight;
  const SparseMatrix LtL = (laplacian.transpose() * laplacian).pruned();
  SparseMatrix A = LtL;
  Eigen::MatrixXd rhs = LtL * template_init;
  {
    std::vector<Eigen::Triplet<double>> diag;
    for (int k = 0; k < corr.size(); ++k) {
      const int j = corr.template_indices[k];
      diag.emplace_back(j, j, w2);
      rhs.row(j) += w2 * corr.scan_points.row(k);
    }
    SparseMatrix S(m, m);
    S.setFromTriplets(diag.begin(), diag.end());
    A += S;
  }

  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) throw Error("laplacian_init: factorization failed (underconstrained)");
  Eigen::MatrixXd X = solver.solve(rhs);
  const double rhs_norm = std::max(rhs.norm(), std::numeric_limits<double>::min());
  for (int refine = 0; refine < 10; ++refine) {
    const Eigen::MatrixXd r = rhs - A * X;
    if (r.norm() <= 1e-8 * rhs_norm) break;
    X += solver.solve(r);
  }
  if ((rhs - A * X).norm() > 1e-8 * rhs_norm) throw Error("laplacian_init: normal equations did not converge");
  return X;
}

InterpenetrationResult interpenetration_energy(const Points& garment_vertices, const SurfaceBVH& body, double w) {
  InterpenetrationResult out;
  for (Eigen::Index i = 0; i < garment_vertices.rows(); ++i) {
    const SurfacePoint s = body.closest_point(garment_vertices.row(i).transpose());
    if (s.inside) {
      out.energy += w * s.distance;
      ++out.inside_count;
    }
  }
  return out;
}

double unpose_energy(const Points& garment_now, const SurfaceBVH& body_now, const Points& garment_unposed,
                     const SurfaceBVH& body_unposed) {
  if (garment_now.rows() != garment_unposed.rows()) {
    throw Error("unpose_energy: vertex count mismatch (" + std::to_string(garment_now.rows()) + " vs " +
                std::to_string(garment_unposed.rows()) + ")");
  }
  double e = 0.0;
  for (Eigen::Index i = 0; i < garment_now.rows(); ++i) {
    const double d = body_now.closest_point(garment_now.row(i).transpose()).distance;
    const double d0 = body_unposed.closest_point(garment_unposed.row(i).transpose()).distance;
    e += (d - d0) * (d - d0);
  }
  return e;
}

TriMesh labeled_submesh(const TriMesh& target, const std::vector<int>& vertex_labels, int label) {
  if (static_cast<int>(vertex_labels.size()) != target.vertex_count()) {
    throw Error("labels: expected " + std::to_string(target.vertex_count()) + " entries, got " +
                std::to_string(vertex_labels.size()));
  }
  std::vector<char> keep(target.face_count(), 0);
  for (int f = 0; f < target.face_count(); ++f) {
    keep[f] = vertex_labels[target.faces(f, 0)] == label && vertex_labels[target.faces(f, 1)] == label &&
              vertex_labels[target.faces(f, 2)] == label;
  }
  return extract_submesh(target, keep).mesh;
}

std::vector<Points> loop_points(const TriMesh& mesh, const std::vector<Loop>& loops) {
  std::vector<Points> out;
  for (const Loop& loop : loops) out.push_back(gather_rows(mesh.vertices, loop));
  return out;
}

std::vector<Points> pair_loops_by_centroid(const Points& template_vertices, const std::vector<Loop>& template_loops,
                                           const std::vector<Points>& target_loops) {
  if (template_loops.size() != target_loops.size()) {
    throw Error("boundary loop count mismatch: template has " + std::to_string(template_loops.size()) +
                ", target has " + std::to_string(target_loops.size()));
  }
  const size_t k = target_loops.size();
  if (k > 8) throw Error("pair_loops_by_centroid: too many loops for exhaustive pairing");
  std::vector<Eigen::Vector3d> a, b;
  for (const Loop& l : template_loops) a.push_back(centroid(gather_rows(template_vertices, l)));
  for (const Points& p : target_loops) b.push_back(centroid(p));
  std::vector<int> perm(k), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (size_t i = 0; i < k; ++i) cost += (a[i] - b[perm[i]]).norm();
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<Points> out;
  for (size_t i = 0; i < k; ++i) out.push_back(target_loops[best[i]]);
  return out;
}

double boundary_residual(const Points& template_vertices, const std::vector<Loop>& template_loops,
                         const std::vector<Points>& target_loops) {
  if (template_loops.size() != target_loops.size()) throw Error("boundary_residual: loop count mismatch");
  double sum = 0.0;
  Eigen::Index count = 0;
  for (size_t l = 0; l < target_loops.size(); ++l) {
    const Loop& loop = template_loops[l];
    for (Eigen::Index s = 0; s < target_loops[l].rows(); ++s) {
      const Eigen::Vector3d q = target_loops[l].row(s).transpose();
      double best = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < loop.size(); ++k) {
        best = std::min(best, point_segment_distance(q, template_vertices.row(loop[k]).transpose(),
                                                     template_vertices.row(loop[(k + 1) % loop.size()]).transpose()));
      }
      sum += best;
      ++count;
    }
  }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

RegistrationResult register_garment(const BodyModel& model, const Garment& garment, const BodyFit& fit,
                                    const TriMesh& target, const std::vector<int>& target_labels, int label,
                                    const std::vector<Points>& target_loops, const RegistrationConfig& config) {
  config.validate();
  garment.validate(model.vertex_count());
  const BodyParams& params = fit.params;

  // Template carried onto the fitted body.
  const Eigen::VectorXd zero_beta = Eigen::VectorXd::Zero(model.shape_count());
  const Points template_offsets = garment_displacements(model, garment, garment.mesh.vertices, zero_beta);
  const Points G_init = pose_garment(model, garment, params, template_offsets);

  TriMesh body_posed = model.template_mesh;
  body_posed.vertices = pose_mesh(model, params, fit.skin_displacements);
  TriMesh body_rest = model.template_mesh;
  body_rest.vertices =
      shaped_template(model, params.beta, PoseMatrix::Zero(model.joint_count(), 3), fit.skin_displacements);
  const SurfaceBVH body_bvh(std::move(body_posed));
  const SurfaceBVH rest_bvh(std::move(body_rest));

  TriMesh target_part = labeled_submesh(target, target_labels, label);
  if (target_part.face_count() == 0) {
    throw Error("register_garment: target has no faces labeled " + std::to_string(label));
  }
  const SurfaceBVH target_bvh(std::move(target_part));

  RegistrationResult result;
  const SparseMatrix L = graph_laplacian(garment.mesh);
  const BoundaryCorrespondence corr =
      match_boundaries(G_init, garment.boundary_loops, target_loops, config.boundary_weight);
  result.initial = laplacian_init(G_init, L, corr);
  result.boundary_residual = boundary_residual(result.initial, garment.boundary_loops, target_loops);

  const UnposeMap unpose = make_unpose_map(model, garment, params);
  const Objective objective{config, L, G_init, target_bvh, body_bvh, rest_bvh, unpose};

  // Preconditioner: Hessian of the quadratic terms, factored once.
  const int m = garment.vertex_count();
  SparseMatrix H = (2.0 * config.laplacian_weight) * SparseMatrix(L.transpose() * L);
  {
    SparseMatrix I(m, m);
    I.setIdentity();
    H += std::max(2.0 * config.data_weight, 1e-6) * I;
  }
  Eigen::SimplicialLDLT<SparseMatrix> precond(H);
  if (precond.info() != Eigen::Success) throw Error("register_garment: preconditioner factorization failed");

  Points G = result.initial;
  Points grad;
  EnergyTerms current = objective.evaluate(G, &grad);
  result.initial_energy = current;
  bool stalled = false;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const Points direction = precond.solve(grad);
    const double slope = (grad.array() * direction.array()).sum();
    if (!(slope > 0.0)) {
      result.converged = true;
      break;
    }
    double alpha = 1.0;
    bool accepted = false;
    Points trial;
    EnergyTerms trial_energy;
    for (int bt = 0; bt < config.max_backtracks; ++bt, alpha *= 0.5) {
      trial = G - alpha * direction;
      trial_energy = objective.evaluate(trial, nullptr);
      if (trial_energy.total <= current.total - 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stalled = true;
      break;
    }
    const double change = (current.total - trial_energy.total) / std::max(current.total, config.energy_floor);
    G = std::move(trial);
    current = objective.evaluate(G, &grad);
    result.iterations.push_back({it, current, alpha});
    if (change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    result.warning = stalled ? "refinement stopped: backtracking found no decrease after " +
                                   std::to_string(result.iterations.size()) + " iterations"
                             : "refinement reached max_iterations (" + std::to_string(config.max_iterations) +
                                   ") without meeting the tolerance";
  }

  result.vertices = G;
  result.displacements = unpose_garment(model, garment, params, G);
  return result;
}

}  // namespace wardrobe
