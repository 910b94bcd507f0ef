#include "helpers.hpp"

#include "wardrobe/mesh.hpp"

#include <unistd.h>

#include <atomic>
#include <queue>
#include <sstream>

namespace testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::ostringstream name;
  name << "wardrobe_test_" << tag << "_" << ::getpid() << "_" << counter++;
  path_ = std::filesystem::temp_directory_path() / name.str();
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

double segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

}  // namespace

double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c) {
  const Eigen::Vector3d n = (b - a).cross(c - a);
  const double area2 = n.squaredNorm();
  if (area2 > 0.0) {
    const Eigen::Vector3d q = p - n * (n.dot(p - a) / area2);
    const double u = n.dot((c - b).cross(q - b)) / area2;
    const double v = n.dot((a - c).cross(q - c)) / area2;
    const double w = 1.0 - u - v;
    if (u >= 0.0 && v >= 0.0 && w >= 0.0) return (p - q).norm();
  }
  return std::min({segment_distance(p, a, b), segment_distance(p, b, c), segment_distance(p, c, a)});
}

double brute_force_distance(const TriMesh& mesh, const Eigen::Vector3d& p) {
  double best = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.face_count(); ++f) {
    best = std::min(best, point_triangle_distance(p, mesh.vertices.row(mesh.faces(f, 0)).transpose(),
                                                  mesh.vertices.row(mesh.faces(f, 1)).transpose(),
                                                  mesh.vertices.row(mesh.faces(f, 2)).transpose()));
  }
  return best;
}

std::vector<double> dijkstra(const TriMesh& mesh, const std::vector<int>& sources) {
  const auto nbrs = vertex_neighbors(mesh);
  std::vector<double> d(mesh.vertex_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (int s : sources) {
    d[s] = 0.0;
    queue.emplace(0.0, s);
  }
  while (!queue.empty()) {
    const auto [dist, v] = queue.top();
    queue.pop();
    if (dist > d[v]) continue;
    for (int w : nbrs[v]) {
      const double nd = dist + (mesh.vertices.row(v) - mesh.vertices.row(w)).norm();
      if (nd < d[w]) {
        d[w] = nd;
        queue.emplace(nd, w);
      }
    }
  }
  return d;
}

}  // namespace testing

namespace testing {

Points lbs_oracle(const BodyModel& m, const BodyParams& p, const Points& rest, const Eigen::MatrixXd& weights) {
  const int n = m.vertex_count();
  const int K = m.joint_count();
  Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(m.template_mesh.vertices.data(), 3 * n);
  flat += m.shape_basis * p.beta;
  const Points J = m.joint_regressor * Points(Eigen::Map<const Points>(flat.data(), n, 3));

  std::vector<Eigen::Matrix4d> world(K);
  for (int j = 0; j < K; ++j) {
    const double angle = p.theta.row(j).norm();
    Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
    if (angle > 0.0)
      local.topLeftCorner<3, 3>() = Eigen::AngleAxisd(angle, p.theta.row(j).transpose() / angle).toRotationMatrix();
    const int parent = m.parents[j];
    Eigen::Vector3d offset = J.row(j).transpose();
    if (parent >= 0) offset -= J.row(parent).transpose();
    local.topRightCorner<3, 1>() = offset;
    world[j] = parent >= 0 ? Eigen::Matrix4d(world[parent] * local) : local;
  }
  Points out(rest.rows(), 3);
  for (Eigen::Index i = 0; i < rest.rows(); ++i) {
    Eigen::Vector4d acc = Eigen::Vector4d::Zero();
    for (int j = 0; j < K; ++j) {
      Eigen::Matrix4d unjoint = Eigen::Matrix4d::Identity();
      unjoint.topRightCorner<3, 1>() = -J.row(j).transpose();
      acc += weights(i, j) * world[j] * unjoint * rest.row(i).transpose().homogeneous();
    }
    out.row(i) = acc.head<3>().transpose() + p.trans.transpose();
  }
  return out;
}

}  // namespace testing

namespace testing {

const BodyModel& humanoid() {
  static const BodyModel model = make_synthetic_body(7);
  return model;
}

BodyParams random_params(const BodyModel& m, std::mt19937_64& rng, double max_angle) {
  BodyParams p;
  p.beta = fixtures::random_vector(rng, m.shape_count(), 2.0);
  p.theta = fixtures::random_pose(rng, m.joint_count(), max_angle);
  p.trans = fixtures::random_vector(rng, 3, 0.5);
  return p;
}

}  // namespace testing
