#include "wardrobe/garment.hpp"

#include "wardrobe/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace wardrobe {
namespace {

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Drops faces until every vertex has a single fan, then keeps the largest
// edge-connected piece.
std::vector<char> manifold_face_subset(const TriMesh& mesh, std::vector<char> keep) {
  const int n = mesh.vertex_count();
  const int F = mesh.face_count();
  std::vector<std::vector<int>> incident(n);
  for (int f = 0; f < F; ++f)
    for (int c = 0; c < 3; ++c) incident[mesh.faces(f, c)].push_back(f);

  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      std::vector<int> fan;
      for (int f : incident[v])
        if (keep[f]) fan.push_back(f);
      if (fan.size() < 2) continue;
      std::vector<int> parent(fan.size());
      std::iota(parent.begin(), parent.end(), 0);
      // Faces around v that share a second vertex share an edge through v.
      for (size_t a = 0; a < fan.size(); ++a) {
        for (size_t b = a + 1; b < fan.size(); ++b) {
          int shared = 0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              if (mesh.faces(fan[a], i) == mesh.faces(fan[b], j)) ++shared;
          if (shared >= 2) parent[find_root(parent, static_cast<int>(a))] = find_root(parent, static_cast<int>(b));
        }
      }
      std::map<int, int> group_size;
      for (size_t a = 0; a < fan.size(); ++a) ++group_size[find_root(parent, static_cast<int>(a))];
      if (group_size.size() < 2) continue;
      int best_root = -1, best_size = -1;
      for (size_t a = 0; a < fan.size(); ++a) {
        const int r = find_root(parent, static_cast<int>(a));
        if (group_size[r] > best_size) {
          best_size = group_size[r];
          best_root = r;
        }
      }
      for (size_t a = 0; a < fan.size(); ++a) {
        if (find_root(parent, static_cast<int>(a)) != best_root) keep[fan[a]] = 0;
      }
      changed = true;
    }
  }

  // Largest edge-connected component.
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < F; ++f) {
    if (!keep[f]) continue;
    for (int c = 0; c < 3; ++c) {
      const int a = mesh.faces(f, c), b = mesh.faces(f, (c + 1) % 3);
      edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  std::vector<int> parent(F);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [edge, faces] : edge_faces)
    for (size_t k = 1; k < faces.size(); ++k) parent[find_root(parent, faces[k])] = find_root(parent, faces[0]);
  std::vector<int> size(F, 0);
  for (int f = 0; f < F; ++f)
    if (keep[f]) ++size[find_root(parent, f)];
  const int largest = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
  for (int f = 0; f < F; ++f)
    if (keep[f] && find_root(parent, f) != largest) keep[f] = 0;
  return keep;
}

// Cylindrical unwrap about the vertical axis.
UVs cylindrical_uvs(const Points& vertices) {
  UVs uv(vertices.rows(), 2);
  if (vertices.rows() == 0) return uv;
  const double y_min = vertices.col(1).minCoeff(), y_max = vertices.col(1).maxCoeff();
  const double span = std::max(y_max - y_min, 1e-12);
  for (Eigen::Index v = 0; v < vertices.rows(); ++v) {
    uv(v, 0) = 0.5 + std::atan2(vertices(v, 0), vertices(v, 2)) / (2.0 * std::numbers::pi);
    uv(v, 1) = (vertices(v, 1) - y_min) / span;
  }
  return uv;
}

void check_displacements(const Garment& garment, const Points& displacements) {
  if (displacements.rows() != garment.vertex_count()) {
    throw Error("garment '" + garment.name + "': displacements have " + std::to_string(displacements.rows()) +
                " rows, garment has " + std::to_string(garment.vertex_count()) + " vertices");
  }
}

void check_indicator(const BodyModel& model, const Garment& garment) {
  if (static_cast<int>(garment.indicator.size()) != garment.vertex_count()) {
    throw Error("garment '" + garment.name + "': indicator length does not match vertex count");
  }
  for (int v : garment.indicator) {
    if (v < 0 || v >= model.vertex_count()) {
      throw Error("garment '" + garment.name + "': indicator entry " + std::to_string(v) + " out of range");
    }
  }
}

}  // namespace

const std::vector<std::string>& garment_classes() {
  static const std::vector<std::string> names = {"shirt", "t-shirt", "coat", "short-pants", "long-pants"};
  return names;
}

void Garment::validate(int body_vertex_count) const {
  wardrobe::validate(mesh);
  if (static_cast<int>(indicator.size()) != mesh.vertex_count()) {
    throw Error("garment '" + name + "': indicator has " + std::to_string(indicator.size()) + " entries for " +
                std::to_string(mesh.vertex_count()) + " vertices");
  }
  for (size_t i = 0; i < indicator.size(); ++i) {
    if (indicator[i] < 0 || indicator[i] >= body_vertex_count) {
      throw Error("garment '" + name + "': indicator[" + std::to_string(i) + "] = " + std::to_string(indicator[i]) +
                  " is not a body vertex");
    }
  }
  // Every consecutive pair must be a directed boundary edge.
  std::map<std::pair<int, int>, int> directed;
  for (int f = 0; f < mesh.face_count(); ++f)
    for (int c = 0; c < 3; ++c) ++directed[{mesh.faces(f, c), mesh.faces(f, (c + 1) % 3)}];
  for (const Loop& loop : boundary_loops) {
    if (loop.size() < 3) throw Error("garment '" + name + "': boundary loop with fewer than 3 vertices");
    for (size_t k = 0; k < loop.size(); ++k) {
      const int a = loop[k], b = loop[(k + 1) % loop.size()];
      if (a < 0 || a >= mesh.vertex_count() || b < 0 || b >= mesh.vertex_count() || !directed.count({a, b}) ||
          directed.count({b, a})) {
        throw Error("garment '" + name + "': boundary loop is not a closed boundary cycle");
      }
    }
  }
}

BodyParams DressedFigure::params(int frame) const {
  if (frame < 0 || frame >= frame_count()) {
    throw Error("frame " + std::to_string(frame) + " out of range (figure has " + std::to_string(frame_count()) +
                " frames)");
  }
  BodyParams p;
  p.beta = beta;
  p.theta = poses[frame];
  p.trans = trans;
  return p;
}

void DressedFigure::validate(const BodyModel& model) const {
  if (beta.size() != model.shape_count()) throw Error("figure: beta does not match the body model");
  if (poses.empty()) throw Error("figure: at least one frame is required");
  for (const auto& theta : poses) {
    if (theta.rows() != model.joint_count()) throw Error("figure: pose does not match the body model");
    if (!theta.allFinite()) throw Error("figure: non-finite pose");
  }
  if (skin_displacements.rows() != 0 && skin_displacements.rows() != model.vertex_count()) {
    throw Error("figure: skin displacements must have one row per body vertex");
  }
  for (const auto& layer : garments) {
    layer.garment.validate(model.vertex_count());
    check_displacements(layer.garment, layer.displacements);
    if (!layer.displacements.allFinite()) throw Error("figure: garment '" + layer.garment.name + "' has non-finite displacements");
  }
}

Eigen::MatrixXd garment_weights(const BodyModel& model, const Garment& garment) {
  check_indicator(model, garment);
  Eigen::MatrixXd W(garment.vertex_count(), model.joint_count());
  for (int i = 0; i < garment.vertex_count(); ++i) W.row(i) = model.weights.row(garment.indicator[i]);
  return W;
}

Points garment_displacements(const BodyModel& model, const Garment& garment, const Points& unposed_vertices,
                             const Eigen::VectorXd& beta) {
  check_indicator(model, garment);
  check_displacements(garment, unposed_vertices);
  const Points body = shaped_template(model, beta, PoseMatrix::Zero(model.joint_count(), 3));
  return unposed_vertices - gather_rows(body, garment.indicator);
}

Points unposed_garment_shape(const BodyModel& model, const Garment& garment, const Eigen::VectorXd& beta,
                             const PoseMatrix& theta, const Points& displacements) {
  check_indicator(model, garment);
  check_displacements(garment, displacements);
  const Points body = shaped_template(model, beta, theta);
  return gather_rows(body, garment.indicator) + displacements;
}

Points pose_garment(const BodyModel& model, const Garment& garment, const BodyParams& params,
                    const Points& displacements) {
  const Points rest = unposed_garment_shape(model, garment, params.beta, params.theta, displacements);
  return skin_points(model, params, rest, garment_weights(model, garment));
}

Points unpose_garment(const BodyModel& model, const Garment& garment, const BodyParams& params,
                      const Points& posed_vertices) {
  check_displacements(garment, posed_vertices);
  const Points canonical =
      unpose_vertices(model, params, posed_vertices, garment_weights(model, garment), garment.indicator);
  return garment_displacements(model, garment, canonical, params.beta);
}

std::vector<LabeledMesh> dress(const BodyModel& model, const DressedFigure& figure, int frame) {
  const BodyParams params = figure.params(frame);
  std::vector<LabeledMesh> out;
  out.push_back({"skin", 0, model.template_mesh});
  out.back().mesh.uvs.resize(0, 2);
  out.back().mesh.vertices = pose_mesh(model, params, figure.skin_displacements);
  for (size_t g = 0; g < figure.garments.size(); ++g) {
    const auto& layer = figure.garments[g];
    LabeledMesh m{layer.garment.name, static_cast<int>(g) + 1, layer.garment.mesh};
    m.mesh.vertices = pose_garment(model, layer.garment, params, layer.displacements);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<LabeledMesh> dress_canonical(const BodyModel& model, const DressedFigure& figure) {
  DressedFigure rest = figure;
  rest.poses = {PoseMatrix::Zero(model.joint_count(), 3)};
  rest.trans.setZero();
  return dress(model, rest, 0);
}

MergedMesh merge_meshes(const std::vector<LabeledMesh>& meshes) {
  Eigen::Index nv = 0, nf = 0;
  for (const auto& m : meshes) {
    nv += m.mesh.vertex_count();
    nf += m.mesh.face_count();
  }
  MergedMesh out;
  out.mesh.vertices.resize(nv, 3);
  out.mesh.faces.resize(nf, 3);
  out.vertex_labels.reserve(static_cast<size_t>(nv));
  Eigen::Index v0 = 0, f0 = 0;
  for (const auto& m : meshes) {
    out.mesh.vertices.middleRows(v0, m.mesh.vertex_count()) = m.mesh.vertices;
    out.mesh.faces.middleRows(f0, m.mesh.face_count()) = m.mesh.faces.array() + static_cast<int>(v0);
    out.vertex_labels.insert(out.vertex_labels.end(), static_cast<size_t>(m.mesh.vertex_count()), m.label);
    v0 += m.mesh.vertex_count();
    f0 += m.mesh.face_count();
  }
  return out;
}

Garment transfer_texture(const Garment& source, const Garment& target) {
  if (source.name != target.name) {
    throw Error("transfer_texture: class mismatch ('" + source.name + "' vs '" + target.name + "')");
  }
  if (source.vertex_count() != target.vertex_count() || source.mesh.faces != target.mesh.faces) {
    throw Error("transfer_texture: topology mismatch between '" + source.name + "' instances");
  }
  if (source.mesh.uvs.rows() != target.mesh.uvs.rows()) {
    throw Error("transfer_texture: UV layout mismatch");
  }
  Garment out = target;
  out.texture = source.texture;
  out.mesh.uvs = source.mesh.uvs;
  return out;
}

Garment carve_garment(const BodyModel& model, const std::string& name, const std::vector<char>& vertex_mask,
                      double offset) {
  const TriMesh& body = model.template_mesh;
  if (static_cast<int>(vertex_mask.size()) != body.vertex_count()) {
    throw Error("carve_garment: mask length does not match body vertex count");
  }
  std::vector<char> keep(body.face_count(), 0);
  for (int f = 0; f < body.face_count(); ++f) {
    keep[f] = vertex_mask[body.faces(f, 0)] && vertex_mask[body.faces(f, 1)] && vertex_mask[body.faces(f, 2)];
  }
  keep = manifold_face_subset(body, std::move(keep));
  if (std::none_of(keep.begin(), keep.end(), [](char k) { return k != 0; })) {
    throw Error("carve_garment: mask for '" + name + "' selects no faces");
  }

  Submesh sub = extract_submesh(body, keep);
  const Points normals = vertex_normals(body);
  Garment g;
  g.name = name;
  g.mesh = std::move(sub.mesh);
  for (int i = 0; i < g.mesh.vertex_count(); ++i) {
    g.mesh.vertices.row(i) += offset * normals.row(sub.vertex_map[i]);
  }
  g.mesh.uvs = cylindrical_uvs(g.mesh.vertices);

  const PointIndex index(body.vertices);
  g.indicator.resize(g.mesh.vertex_count());
  for (int i = 0; i < g.mesh.vertex_count(); ++i) {
    g.indicator[i] = index.nearest(g.mesh.vertices.row(i).transpose()).index;
  }
  g.boundary_loops = boundary_loops(g.mesh);
  g.validate(body.vertex_count());
  return g;
}

Garment make_garment_template(const BodyModel& model, const std::string& garment_class, double offset) {
  if (model.joint_count() != 16) throw Error("make_garment_template: requires the 16-joint synthetic skeleton");
  enum : int { kPelvis = 0, kSpine = 1, kLShoulder = 4, kLElbow = 5, kRShoulder = 7, kRElbow = 8 };
  enum : int { kLHip = 10, kLKnee = 11, kLAnkle = 12, kRHip = 13, kRKnee = 14, kRAnkle = 15 };

  struct Rule {
    std::vector<int> joints;
    double y_min, y_max, abs_x_max;
  };
  static const std::map<std::string, Rule> rules = {
      {"t-shirt", {{kPelvis, kSpine, kLShoulder, kRShoulder}, 0.88, 10.0, 0.34}},
      {"shirt", {{kPelvis, kSpine, kLShoulder, kRShoulder, kLElbow, kRElbow}, 0.88, 10.0, 0.64}},
      {"coat", {{kPelvis, kSpine, kLShoulder, kRShoulder, kLElbow, kRElbow, kLHip, kRHip}, 0.58, 10.0, 0.66}},
      {"short-pants", {{kPelvis, kLHip, kRHip, kLKnee, kRKnee}, 0.58, 1.0, 10.0}},
      {"long-pants", {{kPelvis, kLHip, kRHip, kLKnee, kRKnee, kLAnkle, kRAnkle}, 0.16, 1.0, 10.0}},
  };
  const auto it = rules.find(garment_class);
  if (it == rules.end()) throw Error("unknown garment class '" + garment_class + "'");
  const Rule& rule = it->second;

  const Points& V = model.template_mesh.vertices;
  std::vector<char> mask(V.rows(), 0);
  for (Eigen::Index v = 0; v < V.rows(); ++v) {
    Eigen::Index dominant = 0;
    model.weights.row(v).maxCoeff(&dominant);
    const bool joint_ok = std::find(rule.joints.begin(), rule.joints.end(), dominant) != rule.joints.end();
    mask[v] = joint_ok && V(v, 1) >= rule.y_min && V(v, 1) <= rule.y_max && std::abs(V(v, 0)) <= rule.abs_x_max;
  }
  return carve_garment(model, garment_class, mask, offset);
}

}  // namespace wardrobe
