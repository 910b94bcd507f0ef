#include "wardrobe/body_model.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <unordered_map>

namespace wardrobe {
namespace {

struct JointSpec {
  const char* name;
  Eigen::Vector3d position;
  int parent;
  // Segment the joint's skinning influence is measured against.
  Eigen::Vector3d bone_start;
  Eigen::Vector3d bone_end;
  // The regressor averages the ring of surface vertices cut by the plane
  // through `position` normal to `axis`, within `ring_radius`.
  Eigen::Vector3d axis;
  double ring_radius;
};

struct Capsule {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  double radius;
};

// T-pose, y up, z forward, meters.
const std::array<JointSpec, 16>& skeleton() {
  static const std::array<JointSpec, 16> joints = {{
      {"pelvis", {0.0, 0.92, 0.0}, -1, {-0.11, 0.92, 0.0}, {0.11, 0.92, 0.0}, {0, 1, 0}, 0.25},
      {"spine", {0.0, 1.05, 0.0}, 0, {0.0, 1.00, 0.0}, {0.0, 1.36, 0.0}, {0, 1, 0}, 0.22},
      {"neck", {0.0, 1.44, 0.0}, 1, {0.0, 1.42, 0.0}, {0.0, 1.52, 0.0}, {0, 1, 0}, 0.11},
      {"head", {0.0, 1.53, 0.0}, 2, {0.0, 1.56, 0.0}, {0.0, 1.74, 0.0}, {0, 1, 0}, 0.11},
      {"left_shoulder", {0.19, 1.38, 0.0}, 1, {0.19, 1.38, 0.0}, {0.46, 1.38, 0.0}, {1, 0, 0}, 0.13},
      {"left_elbow", {0.46, 1.38, 0.0}, 4, {0.46, 1.38, 0.0}, {0.70, 1.38, 0.0}, {1, 0, 0}, 0.11},
      {"left_wrist", {0.70, 1.38, 0.0}, 5, {0.70, 1.38, 0.0}, {0.84, 1.38, 0.0}, {1, 0, 0}, 0.10},
      {"right_shoulder", {-0.19, 1.38, 0.0}, 1, {-0.19, 1.38, 0.0}, {-0.46, 1.38, 0.0}, {1, 0, 0}, 0.13},
      {"right_elbow", {-0.46, 1.38, 0.0}, 7, {-0.46, 1.38, 0.0}, {-0.70, 1.38, 0.0}, {1, 0, 0}, 0.11},
      {"right_wrist", {-0.70, 1.38, 0.0}, 8, {-0.70, 1.38, 0.0}, {-0.84, 1.38, 0.0}, {1, 0, 0}, 0.10},
      {"left_hip", {0.11, 0.82, 0.0}, 0, {0.11, 0.84, 0.0}, {0.11, 0.50, 0.0}, {0, 1, 0}, 0.12},
      {"left_knee", {0.11, 0.50, 0.0}, 10, {0.11, 0.50, 0.0}, {0.11, 0.10, 0.0}, {0, 1, 0}, 0.12},
      {"left_ankle", {0.11, 0.12, 0.0}, 11, {0.11, 0.08, 0.0}, {0.11, 0.05, 0.15}, {0, 1, 0}, 0.11},
      {"right_hip", {-0.11, 0.82, 0.0}, 0, {-0.11, 0.84, 0.0}, {-0.11, 0.50, 0.0}, {0, 1, 0}, 0.12},
      {"right_knee", {-0.11, 0.50, 0.0}, 13, {-0.11, 0.50, 0.0}, {-0.11, 0.10, 0.0}, {0, 1, 0}, 0.12},
      {"right_ankle", {-0.11, 0.12, 0.0}, 14, {-0.11, 0.08, 0.0}, {-0.11, 0.05, 0.15}, {0, 1, 0}, 0.11},
  }};
  return joints;
}

const std::vector<Capsule>& body_capsules() {
  static const std::vector<Capsule> capsules = [] {
    std::vector<Capsule> c = {
        {{0.0, 1.00, 0.0}, {0.0, 1.30, 0.0}, 0.16},     // torso
        {{-0.08, 0.90, 0.0}, {0.08, 0.90, 0.0}, 0.13},  // pelvis
        {{0.0, 1.30, 0.0}, {0.0, 1.52, 0.0}, 0.07},     // neck
        {{0.0, 1.63, 0.0}, {0.0, 1.66, 0.0}, 0.12},     // head
    };
    for (double side : {1.0, -1.0}) {
      c.push_back({{side * 0.12, 1.38, 0.0}, {side * 0.46, 1.38, 0.0}, 0.075});  // upper arm
      c.push_back({{side * 0.46, 1.38, 0.0}, {side * 0.70, 1.38, 0.0}, 0.065});  // forearm
      c.push_back({{side * 0.70, 1.38, 0.0}, {side * 0.80, 1.38, 0.0}, 0.06});   // hand
      c.push_back({{side * 0.12, 0.86, 0.0}, {side * 0.12, 0.50, 0.0}, 0.09});   // thigh
      c.push_back({{side * 0.12, 0.50, 0.0}, {side * 0.12, 0.10, 0.0}, 0.075});  // shin
      c.push_back({{side * 0.12, 0.07, 0.0}, {side * 0.12, 0.06, 0.13}, 0.065}); // foot
    }
    return c;
  }();
  return capsules;
}

double segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double smooth_min(double a, double b, double k) {
  const double h = std::max(k - std::abs(a - b), 0.0) / k;
  return std::min(a, b) - h * h * k * 0.25;
}

double body_sdf(const Eigen::Vector3d& p) {
  constexpr double kBlend = 0.04;
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : body_capsules()) {
    const double di = segment_distance(p, c.a, c.b) - c.radius;
    d = std::isinf(d) ? di : smooth_min(d, di, kBlend);
  }
  return d;
}

Eigen::Vector3d sdf_gradient(const Eigen::Vector3d& p) {
  constexpr double kStep = 1e-5;
  Eigen::Vector3d g;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[k] = kStep;
    g[k] = (body_sdf(p + e) - body_sdf(p - e)) / (2.0 * kStep);
  }
  return g;
}

// Marching tetrahedra over a regular grid using the Kuhn (6 tetrahedra per
// cube) subdivision, which is consistent across neighboring cubes and thus
// yields a closed manifold surface.
TriMesh polygonize(double spacing) {
  const Eigen::Vector3d lo(-0.95, -0.05, -0.22);
  const Eigen::Vector3d hi(0.95, 1.82, 0.30);
  const int nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / spacing)) + 1;
  const int ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / spacing)) + 1;
  const int nz = static_cast<int>(std::ceil((hi.z() - lo.z()) / spacing)) + 1;
  auto node_id = [&](int i, int j, int k) { return (static_cast<std::int64_t>(k) * ny + j) * nx + i; };
  auto node_pos = [&](int i, int j, int k) {
    return Eigen::Vector3d(lo.x() + i * spacing, lo.y() + j * spacing, lo.z() + k * spacing);
  };

  std::vector<double> value(static_cast<size_t>(nx) * ny * nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double f = body_sdf(node_pos(i, j, k));
        if (std::abs(f) < 1e-3 * spacing) f = 1e-3 * spacing;  // keep the surface off grid nodes
        value[node_id(i, j, k)] = f;
      }

  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> tris;
  std::unordered_map<std::uint64_t, int> edge_vertex;
  auto cut = [&](std::int64_t a, const Eigen::Vector3d& pa, std::int64_t b, const Eigen::Vector3d& pb) {
    const auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint64_t>(std::max(a, b));
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    const double fa = value[a], fb = value[b];
    const double t = fa / (fa - fb);
    verts.push_back(pa + t * (pb - pa));
    const int id = static_cast<int>(verts.size()) - 1;
    edge_vertex.emplace(key, id);
    return id;
  };
  auto emit = [&](int a, int b, int c, const Eigen::Vector3d& outward) {
    const Eigen::Vector3d n = (verts[b] - verts[a]).cross(verts[c] - verts[a]);
    if (n.dot(outward) < 0.0) std::swap(b, c);
    tris.push_back({a, b, c});
  };

  static constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                      {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
  for (int k = 0; k + 1 < nz; ++k) {
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        std::int64_t corner_id[8];
        Eigen::Vector3d corner_pos[8];
        for (int c = 0; c < 8; ++c) {
          const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
          corner_id[c] = node_id(i + di, j + dj, k + dk);
          corner_pos[c] = node_pos(i + di, j + dj, k + dk);
        }
        for (const auto& tet : kTets) {
          std::array<int, 4> in{}, out{};
          int n_in = 0, n_out = 0;
          for (int c : tet) {
            if (value[corner_id[c]] < 0.0) in[n_in++] = c;
            else out[n_out++] = c;
          }
          if (n_in == 0 || n_out == 0) continue;
          Eigen::Vector3d outward = Eigen::Vector3d::Zero();
          for (int q = 0; q < n_out; ++q) outward += corner_pos[out[q]] / n_out;
          for (int q = 0; q < n_in; ++q) outward -= corner_pos[in[q]] / n_in;
          auto e = [&](int a, int b) { return cut(corner_id[a], corner_pos[a], corner_id[b], corner_pos[b]); };
          if (n_in == 1 || n_out == 1) {
            const int lone = n_in == 1 ? in[0] : out[0];
            const auto& others = n_in == 1 ? out : in;
            emit(e(lone, others[0]), e(lone, others[1]), e(lone, others[2]), outward);
          } else {
            const int e00 = e(in[0], out[0]), e01 = e(in[0], out[1]);
            const int e11 = e(in[1], out[1]), e10 = e(in[1], out[0]);
            emit(e00, e01, e11, outward);
            emit(e00, e11, e10, outward);
          }
        }
      }
    }
  }

  TriMesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
  for (size_t v = 0; v < verts.size(); ++v) mesh.vertices.row(static_cast<Eigen::Index>(v)) = verts[v];
  mesh.faces.resize(static_cast<Eigen::Index>(tris.size()), 3);
  for (size_t f = 0; f < tris.size(); ++f)
    for (int c = 0; c < 3; ++c) mesh.faces(static_cast<Eigen::Index>(f), c) = tris[f][c];
  return mesh;
}

// Tangential smoothing followed by projection back onto the zero level set.
void relax(TriMesh& mesh, int iterations) {
  const auto nbrs = vertex_neighbors(mesh);
  for (int it = 0; it < iterations; ++it) {
    Points next = mesh.vertices;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      if (nbrs[v].empty()) continue;
      Eigen::RowVector3d mean = Eigen::RowVector3d::Zero();
      for (int w : nbrs[v]) mean += mesh.vertices.row(w);
      mean /= static_cast<double>(nbrs[v].size());
      next.row(v) += 0.5 * (mean - mesh.vertices.row(v));
    }
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      Eigen::Vector3d p = next.row(v).transpose();
      for (int newton = 0; newton < 4; ++newton) {
        const Eigen::Vector3d g = sdf_gradient(p);
        const double g2 = g.squaredNorm();
        if (g2 <= 0.0) break;
        p -= body_sdf(p) * g / g2;
      }
      next.row(v) = p.transpose();
    }
    mesh.vertices = std::move(next);
  }
}

// Uniform average of the vertex ring around a joint; falls back to the k
// nearest vertices when the slab catches too few.
Eigen::RowVectorXd regressor_row(const Points& vertices, const JointSpec& joint, double slab) {
  std::vector<int> ring;
  for (int v = 0; v < vertices.rows(); ++v) {
    const Eigen::Vector3d d = vertices.row(v).transpose() - joint.position;
    if (std::abs(d.dot(joint.axis)) <= slab && d.norm() <= joint.ring_radius) ring.push_back(v);
  }
  if (ring.size() < 6) {
    std::vector<std::pair<double, int>> by_distance;
    for (int v = 0; v < vertices.rows(); ++v)
      by_distance.emplace_back((vertices.row(v).transpose() - joint.position).norm(), v);
    std::partial_sort(by_distance.begin(), by_distance.begin() + 12, by_distance.end());
    ring.clear();
    for (int q = 0; q < 12; ++q) ring.push_back(by_distance[q].second);
  }
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(vertices.rows());
  for (int v : ring) row[v] = 1.0 / static_cast<double>(ring.size());
  return row;
}

Eigen::MatrixXd falloff_weights(const Points& vertices, int joint_count) {
  constexpr double kFalloff = 0.025;
  const auto& joints = skeleton();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(vertices.rows(), joint_count);
  std::vector<double> dist(joint_count);
  for (int v = 0; v < vertices.rows(); ++v) {
    const Eigen::Vector3d p = vertices.row(v).transpose();
    for (int j = 0; j < joint_count; ++j) dist[j] = segment_distance(p, joints[j].bone_start, joints[j].bone_end);
    const double nearest = *std::min_element(dist.begin(), dist.end());
    double total = 0.0;
    for (int j = 0; j < joint_count; ++j) {
      const double x = (dist[j] - nearest) / kFalloff;
      const double w = std::exp(-x * x);
      if (w >= 1e-3) {
        W(v, j) = w;
        total += w;
      }
    }
    W.row(v) /= total;
  }
  return W;
}

constexpr double kGridSpacing = 0.06;

}  // namespace

const std::vector<std::string>& synthetic_joint_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& j : skeleton()) out.emplace_back(j.name);
    return out;
  }();
  return names;
}

BodyModel make_synthetic_body(std::uint64_t seed, int shape_count, int joint_count) {
  if (shape_count < 1) throw Error("make_synthetic_body: shape_count must be >= 1");
  if (joint_count < 2 || joint_count > static_cast<int>(skeleton().size())) {
    throw Error("make_synthetic_body: joint_count must be in [2, " + std::to_string(skeleton().size()) + "]");
  }

  BodyModel model;
  model.template_mesh = polygonize(kGridSpacing);
  relax(model.template_mesh, 6);
  validate(model.template_mesh);

  const Points& V = model.template_mesh.vertices;
  const Eigen::Index n = V.rows();
  const int K = joint_count;

  for (int j = 0; j < K; ++j) model.parents.push_back(skeleton()[j].parent);
  model.weights = falloff_weights(V, K);
  model.joint_regressor.resize(K, n);
  const double slab = 0.75 * mean_edge_length(model.template_mesh);
  for (int j = 0; j < K; ++j) model.joint_regressor.row(j) = regressor_row(V, skeleton()[j], slab);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  const Points normals = vertex_normals(model.template_mesh);

  // Smooth random shape fields (per-bone inflation plus global stretches),
  // orthogonalized and scaled to at most 5 cm per unit beta.
  Eigen::MatrixXd raw(3 * n, shape_count);
  for (int s = 0; s < shape_count; ++s) {
    Eigen::VectorXd inflate(K);
    for (int j = 0; j < K; ++j) inflate[j] = gauss(rng);
    const double stretch_y = gauss(rng), stretch_x = gauss(rng);
    for (Eigen::Index v = 0; v < n; ++v) {
      const double radial = model.weights.row(v).dot(inflate);
      Eigen::Vector3d d = radial * normals.row(v).transpose();
      d.y() += stretch_y * (V(v, 1) - 0.92);
      d.x() += stretch_x * V(v, 0);
      raw.block<3, 1>(3 * v, s) = d;
    }
  }
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
                            Eigen::MatrixXd::Identity(3 * n, shape_count);
  model.shape_basis.resize(3 * n, shape_count);
  for (int s = 0; s < shape_count; ++s) {
    double max_norm = 0.0;
    for (Eigen::Index v = 0; v < n; ++v) max_norm = std::max(max_norm, Q.block<3, 1>(3 * v, s).norm());
    const double target = 0.05 * (1.0 - 0.5 * s / std::max(1, shape_count));
    model.shape_basis.col(s) = Q.col(s) * (target / max_norm);
  }

  // Pose correctives: normal offsets modulated by the driving joint's weight, <= 1 cm.
  model.pose_basis = Eigen::MatrixXd::Zero(3 * n, 9 * (K - 1));
  for (int j = 1; j < K; ++j) {
    for (int e = 0; e < 9; ++e) {
      const double amplitude = 0.01 * uniform(rng);
      const int col = 9 * (j - 1) + e;
      for (Eigen::Index v = 0; v < n; ++v) {
        model.pose_basis.block<3, 1>(3 * v, col) = amplitude * model.weights(v, j) * normals.row(v).transpose();
      }
    }
  }

  model.validate();
  return model;
}

}  // namespace wardrobe
