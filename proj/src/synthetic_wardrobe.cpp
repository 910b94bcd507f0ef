#include "wardrobe/synthetic_wardrobe.hpp"

#include "wardrobe/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace wardrobe {
namespace {

constexpr double kTemplateOffset = 0.003;
constexpr double kCoatOffset = 0.008;
constexpr double kMaxJointAngle = 0.3;
constexpr double kBulge = 0.004;
constexpr double kClearance = 0.002;
constexpr int kClearanceRounds = 20;

const std::vector<std::string> kUpper = {"shirt", "t-shirt", "coat"};
const std::vector<std::string> kLower = {"short-pants", "long-pants"};

PoseMatrix random_pose(int joints, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PoseMatrix theta = PoseMatrix::Zero(joints, 3);
  for (int j = 1; j < joints; ++j) {
    Eigen::Vector3d axis(u(rng), u(rng), u(rng));
    if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitX();
    const double angle = kMaxJointAngle * 0.5 * (u(rng) + 1.0);
    theta.row(j) = (angle * axis.normalized()).transpose();
  }
  return theta;
}

// Template offsets plus a smooth, nonnegative bulge along the body normals.
Points random_displacements(const BodyModel& model, const Garment& garment, const Points& body_normals,
                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double kx = 6.0 + 8.0 * u(rng), ky = 6.0 + 8.0 * u(rng), kz = 4.0 + 6.0 * u(rng);
  const double px = 6.283185307179586 * u(rng), py = 6.283185307179586 * u(rng);
  const Eigen::VectorXd zero_beta = Eigen::VectorXd::Zero(model.shape_count());
  Points D = garment_displacements(model, garment, garment.mesh.vertices, zero_beta);
  for (int i = 0; i < garment.vertex_count(); ++i) {
    const Eigen::RowVector3d p = model.template_mesh.vertices.row(garment.indicator[i]);
    const double wave = std::sin(kx * p.x() + px) * std::cos(ky * p.y() + py) * std::cos(kz * p.z());
    D.row(i) += kBulge * (1.0 + wave) * body_normals.row(garment.indicator[i]);
  }
  return D;
}

// Skinning can fold garment vertices into the body near bent joints. Moves
// such vertices to kClearance outside the posed body in every frame and
// writes the correction back into the displacements.
void clear_body(const BodyModel& model, const DressedFigure& fig, GarmentLayer& layer) {
  std::vector<SurfaceBVH> bodies;
  for (int f = 0; f < fig.frame_count(); ++f) {
    TriMesh body = model.template_mesh;
    body.vertices = pose_mesh(model, fig.params(f), fig.skin_displacements);
    bodies.emplace_back(std::move(body));
  }
  for (int round = 0; round < kClearanceRounds; ++round) {
    bool moved = false;
    for (int f = 0; f < fig.frame_count(); ++f) {
      const BodyParams params = fig.params(f);
      Points posed = pose_garment(model, layer.garment, params, layer.displacements);
      std::vector<int> fixed;
      for (int i = 0; i < posed.rows(); ++i) {
        const Eigen::Vector3d x = posed.row(i).transpose();
        const SurfacePoint c = bodies[f].closest_point(x);
        if (!c.inside || c.distance == 0.0) continue;
        posed.row(i) = (c.point + kClearance * (c.point - x) / c.distance).transpose();
        fixed.push_back(i);
      }
      if (fixed.empty()) continue;
      moved = true;
      const Points D = unpose_garment(model, layer.garment, params, posed);
      for (int i : fixed) layer.displacements.row(i) = D.row(i);
    }
    if (!moved) return;
  }
}

}  // namespace

std::vector<std::vector<int>> template_regions(const std::map<std::string, Garment>& templates) {
  std::vector<std::vector<int>> regions;
  for (const char* name : {"t-shirt", "short-pants"}) {
    const auto it = templates.find(name);
    if (it == templates.end()) throw Error(std::string("template_regions: missing template '") + name + "'");
    const std::set<int> unique(it->second.indicator.begin(), it->second.indicator.end());
    regions.emplace_back(unique.begin(), unique.end());
  }
  return regions;
}

SyntheticWardrobe make_synthetic_wardrobe(std::uint64_t seed, int subject_count, int frame_count) {
  if (subject_count < 1) throw Error("make_synthetic_wardrobe: subject_count must be >= 1");
  if (frame_count < 1) throw Error("make_synthetic_wardrobe: frame_count must be >= 1");
  SyntheticWardrobe w;
  w.model = make_synthetic_body(seed);
  const BodyModel& model = w.model;
  for (const auto& name : garment_classes()) {
    w.templates.emplace(name, make_garment_template(model, name, name == "coat" ? kCoatOffset : kTemplateOffset));
  }
  const Points normals = vertex_normals(model.template_mesh);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> noise(0.0, 0.6);
  for (int s = 0; s < subject_count; ++s) {
    WardrobeSubject subject;
    DressedFigure& fig = subject.figure;
    fig.beta.resize(model.shape_count());
    for (Eigen::Index b = 0; b < fig.beta.size(); ++b) fig.beta[b] = u(rng);
    for (int f = 0; f < frame_count; ++f) fig.poses.push_back(random_pose(model.joint_count(), rng));
    fig.trans = Eigen::Vector3d(0.1 * u(rng), 0.05 * u(rng), 0.1 * u(rng));

    for (const auto& name : {kLower[s % kLower.size()], kUpper[s % kUpper.size()]}) {
      const Garment& g = w.templates.at(name);
      fig.garments.push_back({g, random_displacements(model, g, normals, rng)});
    }
    for (auto& layer : fig.garments) clear_body(model, fig, layer);
    subject.fit = {fig.params(0), Points()};
    subject.scan = merge_meshes(dress(model, fig, 0));

    // Later (outer) layers win where garments overlap on the body.
    subject.body_labels.assign(model.vertex_count(), 0);
    for (int k = static_cast<int>(fig.garments.size()) - 1; k >= 0; --k) {
      const int label = std::find(kUpper.begin(), kUpper.end(), fig.garments[k].garment.name) != kUpper.end() ? 1 : 2;
      for (int v : fig.garments[k].garment.indicator)
        if (subject.body_labels[v] == 0) subject.body_labels[v] = label;
    }
    subject.unaries.resize(model.vertex_count(), 3);
    for (int v = 0; v < model.vertex_count(); ++v)
      for (int l = 0; l < 3; ++l) subject.unaries(v, l) = (l == subject.body_labels[v] ? 0.0 : 1.0) + noise(rng);
    w.subjects.push_back(std::move(subject));
  }
  return w;
}

}  // namespace wardrobe
