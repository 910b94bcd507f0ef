#include "wardrobe/geodesic.hpp"

#include "wardrobe/laplacian.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>

namespace wardrobe {
namespace {

// Returns a copy of the SPD system with rows/columns of `pinned` replaced by identity.
SparseMatrix pin_rows(const SparseMatrix& A, const std::vector<char>& pinned) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(A.nonZeros()));
  for (int col = 0; col < A.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
      const auto r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (pinned[r] || pinned[c]) continue;
      triplets.emplace_back(r, c, it.value());
    }
  }
  for (size_t v = 0; v < pinned.size(); ++v)
    if (pinned[v]) triplets.emplace_back(static_cast<int>(v), static_cast<int>(v), 1.0);
  SparseMatrix out(A.rows(), A.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

}  // namespace

std::vector<double> geodesic_distance(const TriMesh& mesh, std::span<const int> sources) {
  const int n = mesh.vertex_count();
  if (sources.empty()) throw Error("geodesic_distance: empty source set");
  std::vector<char> is_source(n, 0);
  for (int s : sources) {
    if (s < 0 || s >= n) throw Error("geodesic_distance: source index " + std::to_string(s) + " out of range");
    is_source[s] = 1;
  }

  const Components comp = connected_components(mesh);
  std::vector<char> comp_has_source(comp.count, 0);
  for (int v = 0; v < n; ++v)
    if (is_source[v]) comp_has_source[comp.id[v]] = 1;

  const SparseMatrix L = cotangent_laplacian(mesh);
  const Eigen::VectorXd mass = lumped_mass(mesh);
  const double h = mean_edge_length(mesh);
  const double t = h * h;

  // Heat step: (M + t L) u = delta_sources. Isolated vertices get a unit diagonal.
  SparseMatrix heat = t * L;
  {
    std::vector<Eigen::Triplet<double>> diag;
    for (int v = 0; v < n; ++v) diag.emplace_back(v, v, mass[v] > 0.0 ? mass[v] : 1.0);
    SparseMatrix M(n, n);
    M.setFromTriplets(diag.begin(), diag.end());
    heat += M;
  }
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v)
    if (is_source[v]) delta[v] = 1.0;

  Eigen::SimplicialLDLT<SparseMatrix> heat_solver(heat);
  if (heat_solver.info() != Eigen::Success) throw Error("geodesic_distance: heat system factorization failed");
  const Eigen::VectorXd u = heat_solver.solve(delta);

  // Integrated divergence of X = -grad u / |grad u|.
  Eigen::VectorXd divergence = Eigen::VectorXd::Zero(n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int i0 = mesh.faces(f, 0), i1 = mesh.faces(f, 1), i2 = mesh.faces(f, 2);
    const Eigen::Vector3d p0 = mesh.vertices.row(i0), p1 = mesh.vertices.row(i1), p2 = mesh.vertices.row(i2);
    const Eigen::Vector3d raw_normal = (p1 - p0).cross(p2 - p0);
    const double twice_area = raw_normal.norm();
    if (twice_area <= 0.0) continue;
    const Eigen::Vector3d normal = raw_normal / twice_area;
    // grad u = sum_i u_i (N x e_i) / (2A), e_i the edge opposite vertex i (CCW).
    const Eigen::Vector3d grad =
        (u[i0] * normal.cross(p2 - p1) + u[i1] * normal.cross(p0 - p2) + u[i2] * normal.cross(p1 - p0)) / twice_area;
    const double grad_norm = grad.norm();
    if (!(grad_norm > 0.0)) continue;
    const Eigen::Vector3d X = -grad / grad_norm;

    const int ids[3] = {i0, i1, i2};
    const Eigen::Vector3d pts[3] = {p0, p1, p2};
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d& p = pts[k];
      const Eigen::Vector3d& a = pts[(k + 1) % 3];
      const Eigen::Vector3d& b = pts[(k + 2) % 3];
      const Eigen::Vector3d e1 = a - p, e2 = b - p;
      // Angle at b is opposite e1, angle at a is opposite e2.
      const Eigen::Vector3d ba = a - b, bp = p - b;
      const Eigen::Vector3d ab = b - a, ap = p - a;
      const double cot_b = ba.dot(bp) / ba.cross(bp).norm();
      const double cot_a = ab.dot(ap) / ab.cross(ap).norm();
      divergence[ids[k]] += 0.5 * (cot_b * e1.dot(X) + cot_a * e2.dot(X));
    }
  }

  // Poisson step: L phi = -div with one pinned vertex per component.
  std::vector<char> pinned(n, 0);
  std::vector<char> comp_pinned(comp.count, 0);
  for (int v = 0; v < n; ++v) {
    if (is_source[v] && !comp_pinned[comp.id[v]]) {
      pinned[v] = 1;
      comp_pinned[comp.id[v]] = 1;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!comp_pinned[comp.id[v]]) {
      pinned[v] = 1;
      comp_pinned[comp.id[v]] = 1;
    }
  }
  Eigen::VectorXd rhs = -divergence;
  for (int v = 0; v < n; ++v)
    if (pinned[v]) rhs[v] = 0.0;
  Eigen::SimplicialLDLT<SparseMatrix> poisson_solver(pin_rows(L, pinned));
  if (poisson_solver.info() != Eigen::Success) throw Error("geodesic_distance: Poisson system factorization failed");
  const Eigen::VectorXd phi = poisson_solver.solve(rhs);

  std::vector<double> offset(comp.count, std::numeric_limits<double>::infinity());
  for (int v = 0; v < n; ++v)
    if (is_source[v]) offset[comp.id[v]] = std::min(offset[comp.id[v]], phi[v]);

  std::vector<double> dist(n);
  for (int v = 0; v < n; ++v) {
    if (!comp_has_source[comp.id[v]]) {
      dist[v] = kUnreachable;
    } else if (is_source[v]) {
      dist[v] = 0.0;
    } else {
      dist[v] = std::max(0.0, phi[v] - offset[comp.id[v]]);
    }
  }
  return dist;
}

}  // namespace wardrobe
