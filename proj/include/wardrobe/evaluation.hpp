#pragma once

#include "wardrobe/garment.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wardrobe {

/// Mean vertex-to-surface distance from `from` to the surface of `to`.
double mean_surface_distance(const TriMesh& from, const TriMesh& to);

/// Symmetric error of one instance: mean pred->gt plus mean gt->pred (summed,
/// not averaged).
double symmetric_error(const TriMesh& pred, const TriMesh& gt);

/// E^g: symmetric error of the garment named `garment`, averaged over
/// instances. Each instance is a list of labeled meshes; the garment is
/// looked up by name on both sides.
double garment_error(const std::vector<std::vector<LabeledMesh>>& pred,
                     const std::vector<std::vector<LabeledMesh>>& gt, const std::string& garment);

/// Mean of E^g over every garment present in the ground truth (skin excluded).
struct SurfaceErrors {
  std::map<std::string, double> per_garment;
  double overall = 0.0;
};
SurfaceErrors surface_errors(const std::vector<std::vector<LabeledMesh>>& pred,
                             const std::vector<std::vector<LabeledMesh>>& gt);

/// Sum of squared vertex differences of the stacked canonical (zero pose,
/// zero translation) meshes.
double loss_3d_tpose(const BodyModel& model, const DressedFigure& pred, const DressedFigure& gt);

/// Sum over frames of squared vertex differences of the stacked posed meshes
/// (translation excluded). `frames` empty means all frames.
double loss_3d_posed(const BodyModel& model, const DressedFigure& pred, const DressedFigure& gt,
                     const std::vector<int>& frames = {});

struct IntermediateLosses {
  double theta = 0.0;
  double beta = 0.0;
  double z = 0.0;
};
/// Squared-difference sums over poses (all frames), shape and garment codes.
IntermediateLosses intermediate_losses(const DressedFigure& pred, const DressedFigure& gt,
                                       const std::vector<Eigen::VectorXd>& z_pred = {},
                                       const std::vector<Eigen::VectorXd>& z_gt = {});

/// Pinhole camera; camera frame x right, y down, z forward.
struct Camera {
  double focal = 512.0;
  double cx = 256.0;
  double cy = 256.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // world to camera
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  /// Throws Error for a non-positive focal length or a non-rotation matrix.
  void validate() const;
  [[nodiscard]] Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }
};

/// Camera at `eye` looking at `target`, with focal = height and the principal
/// point at the image center.
Camera look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up, int width,
               int height);

/// Integer label raster, row-major: 0 background, 1 skin, 2.. garments.
struct LabelImage {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  std::vector<std::string> legend;  // legend[k] names label k
  Camera camera;

  LabelImage() = default;
  LabelImage(int w, int h) : width(w), height(h), labels(static_cast<size_t>(w) * h, 0) {
    if (w <= 0 || h <= 0) throw Error("label image dimensions must be positive");
  }
  [[nodiscard]] int at(int x, int y) const { return labels[static_cast<size_t>(y) * width + x]; }
  int& at(int x, int y) { return labels[static_cast<size_t>(y) * width + x]; }
};

/// Z-buffered rasterization sampled at pixel centers. A mesh with label g is
/// drawn with pixel value g + 1. Depth ties (relative 1e-9) go to the higher
/// label. Triangles with a vertex at or behind the camera plane are skipped.
LabelImage rasterize_labels(const std::vector<LabeledMesh>& meshes, const Camera& camera, int width, int height);

struct SegmentationLoss {
  double loss = 0.0;  // squared one-hot difference, 2 per mismatched pixel
  std::map<int, double> iou;  // per label present in either image
};
SegmentationLoss segmentation_loss(const LabelImage& rendered, const LabelImage& input);

void write_label_png(const LabelImage& image, const std::filesystem::path& path);
LabelImage read_label_png(const std::filesystem::path& path);

}  // namespace wardrobe
