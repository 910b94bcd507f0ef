#pragma once

#include "wardrobe/mesh.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace wardrobe {

/// Per-joint axis-angle rotations, one row per joint (radians).
using PoseMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
/// Rigid 3x4 transform [R | t].
using Affine34 = Eigen::Matrix<double, 3, 4>;

/// Parametric body: template mesh plus linear shape and pose blendshapes,
/// a joint regressor and linear blend skinning weights.
///
/// Basis layout: row 3*i + c of shape_basis / pose_basis holds coordinate c of
/// vertex i. pose_basis columns are grouped 9 per non-root joint and driven by
/// the row-major entries of R_j - I.
struct BodyModel {
  TriMesh template_mesh;
  Eigen::MatrixXd shape_basis;      // 3n x n_beta, meters per unit beta
  Eigen::MatrixXd pose_basis;       // 3n x 9(K-1)
  Eigen::MatrixXd joint_regressor;  // K x n
  Eigen::MatrixXd weights;          // n x K, rows sum to one
  std::vector<int> parents;         // parents[0] == -1

  [[nodiscard]] int vertex_count() const { return template_mesh.vertex_count(); }
  [[nodiscard]] int joint_count() const { return static_cast<int>(parents.size()); }
  [[nodiscard]] int shape_count() const { return static_cast<int>(shape_basis.cols()); }

  /// Throws Error on inconsistent dimensions, bad weights or a malformed tree.
  void validate() const;
};

struct BodyParams {
  Eigen::VectorXd beta;
  PoseMatrix theta;
  Eigen::Vector3d trans = Eigen::Vector3d::Zero();

  static BodyParams zero(const BodyModel& model);

  /// Copy with every joint's rotation angle wrapped into [0, 2*pi).
  [[nodiscard]] BodyParams normalized() const;
};

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis_angle);

/// Pose-blendshape driver: row-major entries of R_j - I for joints 1..K-1.
Eigen::VectorXd pose_feature(const PoseMatrix& theta);

/// T + B_s beta + B_p f(theta) + D. An empty `displacements` means zero.
Points shaped_template(const BodyModel& model, const Eigen::VectorXd& beta, const PoseMatrix& theta,
                       const Points& displacements = Points());

/// Per-vertex pose-blendshape offsets B_p f(theta), n x 3.
Points pose_offsets(const BodyModel& model, const PoseMatrix& theta);

/// Rest joint locations J (T + B_s beta), K x 3.
Points joint_locations(const BodyModel& model, const Eigen::VectorXd& beta);

/// Skinning transforms G_j * [I | -J_j] composed down the kinematic tree.
std::vector<Affine34> skinning_transforms(const BodyModel& model, const Eigen::VectorXd& beta,
                                          const PoseMatrix& theta);

/// Per-point blended transforms sum_j w_ij G'_j.
std::vector<Affine34> blend_transforms(std::span<const Affine34> joint_transforms, const Eigen::MatrixXd& weights);

/// Posed body vertices (world space, includes trans).
Points pose_mesh(const BodyModel& model, const BodyParams& params, const Points& displacements = Points());

/// Skins arbitrary rest-space points with the given per-point weights (m x K).
Points skin_points(const BodyModel& model, const BodyParams& params, const Points& rest_points,
                   const Eigen::MatrixXd& weights);

/// Inverse of skin_points. When `associated` is non-empty, each point's
/// associated body vertex pose-blendshape offset is subtracted afterwards, so
/// the result lives in the zero-pose canonical space.
/// Throws Error naming the point if a blended transform is singular.
Points unpose_vertices(const BodyModel& model, const BodyParams& params, const Points& posed_points,
                       const Eigen::MatrixXd& weights, std::span<const int> associated = {});

/// Deterministic capsule-limb humanoid with `joint_count` joints (2..16).
BodyModel make_synthetic_body(std::uint64_t seed, int shape_count = 10, int joint_count = 16);

/// Names of the synthetic skeleton joints, in index order.
const std::vector<std::string>& synthetic_joint_names();

}  // namespace wardrobe
