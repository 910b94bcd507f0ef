#include "fixtures.hpp"

#include "wardrobe/bvh.hpp"
#include "wardrobe/primitives.hpp"

namespace fixtures {

BodyModel sphere_body(int subdivisions, double radius) {
  BodyModel m;
  m.template_mesh = make_icosphere(subdivisions, radius);
  const int n = m.vertex_count();
  const Points& V = m.template_mesh.vertices;

  m.parents = {-1, 0};
  m.shape_basis = Eigen::Map<const Eigen::VectorXd>(V.data(), 3 * n);
  m.pose_basis = Eigen::MatrixXd::Zero(3 * n, 9);

  m.weights.resize(n, 2);
  m.joint_regressor = Eigen::MatrixXd::Zero(2, n);
  int upper = 0;
  for (int v = 0; v < n; ++v) {
    const double t = std::clamp(0.5 * (V(v, 1) / radius + 1.0), 0.0, 1.0);
    m.weights(v, 0) = 1.0 - t;
    m.weights(v, 1) = t;
    m.joint_regressor(0, v) = 1.0 / n;
    if (V(v, 1) > 0.5 * radius) ++upper;
  }
  for (int v = 0; v < n; ++v) {
    if (V(v, 1) > 0.5 * radius) m.joint_regressor(1, v) = 1.0 / upper;
  }
  m.validate();
  return m;
}

Garment sphere_cap(const BodyModel& body, double height, double offset, double indicator_angle) {
  const Points& V = body.template_mesh.vertices;
  const double radius = V.row(0).norm();
  std::vector<char> mask(V.rows());
  for (Eigen::Index v = 0; v < V.rows(); ++v) mask[v] = V(v, 1) >= height * radius;
  Garment cap = carve_garment(body, "cap", mask, offset);

  const Eigen::Matrix3d R = Eigen::AngleAxisd(indicator_angle, Eigen::Vector3d::UnitX()).toRotationMatrix();
  for (int i = 0; i < cap.vertex_count(); ++i) {
    const Eigen::Vector3d q = R * cap.mesh.vertices.row(i).transpose();
    cap.indicator[i] = nearest_point_brute_force(V, q).index;
  }
  cap.validate(body.vertex_count());
  return cap;
}

TrimmedGarment trimmed_sleeve() {
  TrimmedGarment t;
  t.model = make_synthetic_body(0);
  t.garment = make_garment_template(t.model, "t-shirt");
  const Points& V = t.garment.mesh.vertices;
  const double xmax = V.col(0).cwiseAbs().maxCoeff();
  constexpr double kShoulder = 0.16;
  t.cut = xmax - 0.2 * (xmax - kShoulder);

  std::vector<char> keep(t.garment.mesh.face_count(), 1);
  for (int f = 0; f < t.garment.mesh.face_count(); ++f) {
    for (int c = 0; c < 3; ++c) {
      if (std::abs(V(t.garment.mesh.faces(f, c), 0)) > t.cut) keep[f] = 0;
    }
  }
  t.target = extract_submesh(t.garment.mesh, keep).mesh;
  t.target_loops =
      pair_loops_by_centroid(V, t.garment.boundary_loops, loop_points(t.target, boundary_loops(t.target)));
  return t;
}

double interior_laplacian_residual(const TriMesh& mesh, const Points& deformed, const Points& original) {
  const Points r = graph_laplacian(mesh) * (deformed - original);
  std::vector<char> on_boundary(mesh.vertex_count(), 0);
  for (const auto& loop : boundary_loops(mesh))
    for (int v : loop) on_boundary[v] = 1;
  double sum = 0.0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (!on_boundary[v]) sum += r.row(v).squaredNorm();
  }
  return std::sqrt(sum);
}

Points snap_boundary(const Points& vertices, const BoundaryCorrespondence& corr) {
  Points sum = Points::Zero(vertices.rows(), 3);
  std::vector<int> count(vertices.rows(), 0);
  for (int k = 0; k < corr.size(); ++k) {
    sum.row(corr.template_indices[k]) += corr.scan_points.row(k);
    ++count[corr.template_indices[k]];
  }
  Points out = vertices;
  for (Eigen::Index v = 0; v < vertices.rows(); ++v) {
    if (count[v]) out.row(v) = sum.row(v) / count[v];
  }
  return out;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

PoseMatrix random_pose(std::mt19937_64& rng, int joints, double max_angle) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, max_angle);
  PoseMatrix theta(joints, 3);
  for (int j = 0; j < joints; ++j) {
    Eigen::Vector3d axis(g(rng), g(rng), g(rng));
    theta.row(j) = (u(rng) * axis.normalized()).transpose();
  }
  return theta;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int size, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = u(rng);
  return v;
}

}  // namespace fixtures
