#include "wardrobe/retarget.hpp"

#include "wardrobe/bvh.hpp"
#include "wardrobe/registration.hpp"

#include <limits>

namespace wardrobe {
namespace {

const GarmentLayer& layer_at(const DressedFigure& figure, int index) {
  if (index < 0 || index >= static_cast<int>(figure.garments.size())) {
    throw Error("garment index " + std::to_string(index) + " out of range");
  }
  const GarmentLayer& layer = figure.garments[index];
  if (layer.displacements.rows() != layer.garment.vertex_count()) {
    throw Error("garment '" + layer.garment.name + "' has no displacements");
  }
  return layer;
}

PoseMatrix zero_pose(const BodyModel& model) { return PoseMatrix::Zero(model.joint_count(), 3); }

}  // namespace

RetargetStrategy parse_strategy(const std::string& name) {
  if (name == "naive") return RetargetStrategy::Naive;
  if (name == "body-aware") return RetargetStrategy::BodyAware;
  throw Error("unknown retargeting strategy '" + name + "' (expected naive or body-aware)");
}

std::string to_string(RetargetStrategy strategy) {
  return strategy == RetargetStrategy::Naive ? "naive" : "body-aware";
}

RetargetedGarment retarget_naive(const BodyModel& model, const DressedFigure& source, int garment_index,
                                 const BodyParams& target_params) {
  const GarmentLayer& layer = layer_at(source, garment_index);
  RetargetedGarment out;
  out.displacements = layer.displacements;
  out.posed = pose_garment(model, layer.garment, target_params, out.displacements);
  return out;
}

std::vector<int> nearest_body_vertices(const Points& garment, const Points& body) {
  if (body.rows() == 0) throw Error("nearest_body_vertices: empty body");
  std::vector<int> out(garment.rows());
  if (static_cast<double>(garment.rows()) * static_cast<double>(body.rows()) <= 1e6) {
    for (Eigen::Index i = 0; i < garment.rows(); ++i) {
      out[i] = nearest_point_brute_force(body, garment.row(i).transpose()).index;
    }
  } else {
    const PointIndex index(body);
    for (Eigen::Index i = 0; i < garment.rows(); ++i) out[i] = index.nearest(garment.row(i).transpose()).index;
  }
  return out;
}

RetargetedGarment retarget_body_aware(const BodyModel& model, const DressedFigure& source, int garment_index,
                                      const BodyParams& target_params, const Points& target_skin) {
  const GarmentLayer& layer = layer_at(source, garment_index);
  const Points garment_rest =
      unposed_garment_shape(model, layer.garment, source.beta, zero_pose(model), layer.displacements);
  const Points source_body = shaped_template(model, source.beta, zero_pose(model), source.skin_displacements);
  const Points target_body = shaped_template(model, target_params.beta, zero_pose(model), target_skin);

  const std::vector<int> nearest = nearest_body_vertices(garment_rest, source_body);
  Points moved = garment_rest;
  for (Eigen::Index k = 0; k < moved.rows(); ++k) {
    moved.row(k) += target_body.row(nearest[k]) - source_body.row(nearest[k]);
  }
  RetargetedGarment out;
  out.displacements = garment_displacements(model, layer.garment, moved, target_params.beta);
  out.posed = pose_garment(model, layer.garment, target_params, out.displacements);
  return out;
}

RetargetReport retarget_pipeline(const BodyModel& model, const DressedFigure& source, const DressedFigure& target,
                                 RetargetStrategy strategy, double interp_weight) {
  source.validate(model);
  target.validate(model);
  RetargetReport report;
  report.figure = target;
  report.figure.garments.clear();

  const BodyParams params = target.params(0);
  TriMesh body = model.template_mesh;
  body.vertices = pose_mesh(model, params, target.skin_displacements);
  const SurfaceBVH bvh(std::move(body));

  for (int g = 0; g < static_cast<int>(source.garments.size()); ++g) {
    const RetargetedGarment moved = strategy == RetargetStrategy::Naive
                                        ? retarget_naive(model, source, g, params)
                                        : retarget_body_aware(model, source, g, params, target.skin_displacements);
    report.figure.garments.push_back({source.garments[g].garment, moved.displacements});
    const InterpenetrationResult interp = interpenetration_energy(moved.posed, bvh, interp_weight);
    report.garments.push_back({source.garments[g].garment.name, interp.inside_count, interp.energy});
  }
  return report;
}

}  // namespace wardrobe
