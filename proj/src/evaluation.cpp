#include "wardrobe/evaluation.hpp"

#include "wardrobe/bvh.hpp"

#include <set>

namespace wardrobe {
namespace {

const LabeledMesh& find_garment(const std::vector<LabeledMesh>& instance, const std::string& name, const char* side) {
  for (const auto& m : instance) {
    if (m.label != 0 && m.name == name) return m;
  }
  throw Error(std::string("garment '") + name + "' is absent from the " + side + " instance");
}

double stacked_squared_difference(const std::vector<LabeledMesh>& a, const std::vector<LabeledMesh>& b) {
  if (a.size() != b.size()) throw Error("3D loss: figures have different numbers of layers");
  double sum = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k].mesh.vertex_count() != b[k].mesh.vertex_count()) {
      throw Error("3D loss: layer '" + a[k].name + "' has mismatched vertex counts");
    }
    sum += (a[k].mesh.vertices - b[k].mesh.vertices).squaredNorm();
  }
  return sum;
}

}  // namespace

double mean_surface_distance(const TriMesh& from, const TriMesh& to) {
  if (from.vertex_count() == 0) throw Error("mean_surface_distance: empty source mesh");
  const SurfaceBVH bvh(to);
  double sum = 0.0;
  for (int i = 0; i < from.vertex_count(); ++i) sum += bvh.closest_point(from.vertices.row(i).transpose()).distance;
  return sum / from.vertex_count();
}

double symmetric_error(const TriMesh& pred, const TriMesh& gt) {
  return mean_surface_distance(pred, gt) + mean_surface_distance(gt, pred);
}

double garment_error(const std::vector<std::vector<LabeledMesh>>& pred,
                     const std::vector<std::vector<LabeledMesh>>& gt, const std::string& garment) {
  if (pred.size() != gt.size()) throw Error("garment_error: instance count mismatch");
  if (pred.empty()) throw Error("garment_error: no instances");
  double sum = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    sum += symmetric_error(find_garment(pred[i], garment, "predicted").mesh, find_garment(gt[i], garment, "ground-truth").mesh);
  }
  return sum / static_cast<double>(pred.size());
}

SurfaceErrors surface_errors(const std::vector<std::vector<LabeledMesh>>& pred,
                             const std::vector<std::vector<LabeledMesh>>& gt) {
  std::set<std::string> names;
  for (const auto& instance : gt)
    for (const auto& m : instance)
      if (m.label != 0) names.insert(m.name);
  SurfaceErrors out;
  for (const auto& name : names) out.per_garment[name] = garment_error(pred, gt, name);
  double sum = 0.0;
  for (const auto& [name, e] : out.per_garment) sum += e;
  out.overall = names.empty() ? 0.0 : sum / static_cast<double>(names.size());
  return out;
}

double loss_3d_tpose(const BodyModel& model, const DressedFigure& pred, const DressedFigure& gt) {
  return stacked_squared_difference(dress_canonical(model, pred), dress_canonical(model, gt));
}

double loss_3d_posed(const BodyModel& model, const DressedFigure& pred, const DressedFigure& gt,
                     const std::vector<int>& frames) {
  if (pred.frame_count() != gt.frame_count()) throw Error("loss_3d_posed: frame count mismatch");
  std::vector<int> which = frames;
  if (which.empty())
    for (int f = 0; f < gt.frame_count(); ++f) which.push_back(f);
  DressedFigure p = pred, g = gt;
  p.trans.setZero();
  g.trans.setZero();
  double sum = 0.0;
  for (int f : which) sum += stacked_squared_difference(dress(model, p, f), dress(model, g, f));
  return sum;
}

IntermediateLosses intermediate_losses(const DressedFigure& pred, const DressedFigure& gt,
                                       const std::vector<Eigen::VectorXd>& z_pred,
                                       const std::vector<Eigen::VectorXd>& z_gt) {
  if (pred.beta.size() != gt.beta.size()) throw Error("intermediate_losses: beta size mismatch");
  if (pred.frame_count() != gt.frame_count()) throw Error("intermediate_losses: frame count mismatch");
  if (z_pred.size() != z_gt.size()) throw Error("intermediate_losses: garment code count mismatch");
  IntermediateLosses out;
  out.beta = (pred.beta - gt.beta).squaredNorm();
  for (int f = 0; f < gt.frame_count(); ++f) {
    if (pred.poses[f].rows() != gt.poses[f].rows()) throw Error("intermediate_losses: pose size mismatch");
    out.theta += (pred.poses[f] - gt.poses[f]).squaredNorm();
  }
  for (size_t g = 0; g < z_gt.size(); ++g) {
    if (z_pred[g].size() != z_gt[g].size()) throw Error("intermediate_losses: garment code size mismatch");
    out.z += (z_pred[g] - z_gt[g]).squaredNorm();
  }
  return out;
}

void Camera::validate() const {
  if (!(focal > 0.0) || !std::isfinite(focal)) throw Error("camera: focal length must be positive");
  if (!std::isfinite(cx) || !std::isfinite(cy) || !translation.allFinite() || !rotation.allFinite()) {
    throw Error("camera: non-finite parameters");
  }
  if (!(rotation.transpose() * rotation).isIdentity(1e-6) || rotation.determinant() < 0.0) {
    throw Error("camera: rotation is not a proper rotation matrix");
  }
}

Camera look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up, int width,
               int height) {
  if (width <= 0 || height <= 0) throw Error("look_at: image dimensions must be positive");
  const Eigen::Vector3d forward = target - eye;
  if (!(forward.norm() > 0.0)) throw Error("look_at: eye and target coincide");
  const Eigen::Vector3d z = forward.normalized();
  const Eigen::Vector3d x_raw = z.cross(up);
  if (!(x_raw.norm() > 1e-12)) throw Error("look_at: up vector is parallel to the viewing direction");
  const Eigen::Vector3d x = x_raw.normalized();
  const Eigen::Vector3d y = z.cross(x);  // image down
  Camera cam;
  cam.rotation.row(0) = x.transpose();
  cam.rotation.row(1) = y.transpose();
  cam.rotation.row(2) = z.transpose();
  cam.translation = -cam.rotation * eye;
  cam.focal = height;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  return cam;
}

SegmentationLoss segmentation_loss(const LabelImage& rendered, const LabelImage& input) {
  if (rendered.width != input.width || rendered.height != input.height) {
    throw Error("segmentation_loss: image dimensions differ (" + std::to_string(rendered.width) + "x" +
                std::to_string(rendered.height) + " vs " + std::to_string(input.width) + "x" +
                std::to_string(input.height) + ")");
  }
  SegmentationLoss out;
  std::map<int, std::pair<long, long>> counts;  // label -> (intersection, union)
  for (size_t p = 0; p < rendered.labels.size(); ++p) {
    const int a = rendered.labels[p], b = input.labels[p];
    if (a != b) out.loss += 2.0;
    if (a == b) {
      ++counts[a].first;
      ++counts[a].second;
    } else {
      ++counts[a].second;
      ++counts[b].second;
    }
  }
  for (const auto& [label, c] : counts) out.iou[label] = static_cast<double>(c.first) / static_cast<double>(c.second);
  return out;
}

}  // namespace wardrobe
