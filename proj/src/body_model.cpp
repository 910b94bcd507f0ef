#include "wardrobe/body_model.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace wardrobe {
namespace {

void check_params(const BodyModel& model, const Eigen::VectorXd& beta, const PoseMatrix& theta) {
  if (beta.size() != model.shape_count()) {
    throw Error("beta has " + std::to_string(beta.size()) + " entries, model expects " +
                std::to_string(model.shape_count()));
  }
  if (theta.rows() != model.joint_count()) {
    throw Error("theta has " + std::to_string(theta.rows()) + " joints, model expects " +
                std::to_string(model.joint_count()));
  }
  if (!beta.allFinite()) throw Error("beta is not finite");
  if (!theta.allFinite()) throw Error("theta contains a non-finite rotation");
}

Points reshape_vertices(const Eigen::VectorXd& flat) {
  return Eigen::Map<const Points>(flat.data(), flat.size() / 3, 3);
}

}  // namespace

void BodyModel::validate() const {
  wardrobe::validate(template_mesh);
  const Eigen::Index n = vertex_count();
  const int K = joint_count();
  if (K < 1) throw Error("body model: no joints");
  if (shape_basis.rows() != 3 * n) throw Error("body model: shape_basis must have 3n rows");
  if (pose_basis.rows() != 3 * n || pose_basis.cols() != 9 * (K - 1)) {
    throw Error("body model: pose_basis must be 3n x 9(K-1)");
  }
  if (joint_regressor.rows() != K || joint_regressor.cols() != n) {
    throw Error("body model: joint_regressor must be K x n");
  }
  if (weights.rows() != n || weights.cols() != K) throw Error("body model: weights must be n x K");
  if (!shape_basis.allFinite() || !pose_basis.allFinite() || !joint_regressor.allFinite() || !weights.allFinite()) {
    throw Error("body model: non-finite coefficients");
  }
  if (parents[0] != -1) throw Error("body model: joint 0 must be the root (parent -1)");
  for (int j = 1; j < K; ++j) {
    if (parents[j] < 0 || parents[j] >= j) {
      throw Error("body model: joint " + std::to_string(j) + " must have a parent with a smaller index");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((weights.row(i).array() < 0.0).any()) {
      throw Error("body model: negative skinning weight at vertex " + std::to_string(i));
    }
    if (std::abs(weights.row(i).sum() - 1.0) > 1e-9) {
      throw Error("body model: skinning weights of vertex " + std::to_string(i) + " do not sum to one");
    }
  }
}

BodyParams BodyParams::zero(const BodyModel& model) {
  BodyParams p;
  p.beta = Eigen::VectorXd::Zero(model.shape_count());
  p.theta = PoseMatrix::Zero(model.joint_count(), 3);
  return p;
}

BodyParams BodyParams::normalized() const {
  BodyParams out = *this;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (Eigen::Index j = 0; j < out.theta.rows(); ++j) {
    const double angle = out.theta.row(j).norm();
    if (angle >= kTwoPi) out.theta.row(j) *= std::fmod(angle, kTwoPi) / angle;
  }
  return out;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& axis_angle) {
  const double angle = axis_angle.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
}

Eigen::VectorXd pose_feature(const PoseMatrix& theta) {
  const Eigen::Index K = theta.rows();
  Eigen::VectorXd feature(9 * std::max<Eigen::Index>(K - 1, 0));
  for (Eigen::Index j = 1; j < K; ++j) {
    const Eigen::Matrix3d d = rodrigues(theta.row(j).transpose()) - Eigen::Matrix3d::Identity();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) feature[9 * (j - 1) + 3 * r + c] = d(r, c);
  }
  return feature;
}

Points pose_offsets(const BodyModel& model, const PoseMatrix& theta) {
  if (theta.rows() != model.joint_count()) throw Error("theta joint count does not match model");
  return reshape_vertices(model.pose_basis * pose_feature(theta));
}

Points shaped_template(const BodyModel& model, const Eigen::VectorXd& beta, const PoseMatrix& theta,
                       const Points& displacements) {
  check_params(model, beta, theta);
  const Eigen::Index n = model.vertex_count();
  if (displacements.rows() != 0 && displacements.rows() != n) {
    throw Error("displacements have " + std::to_string(displacements.rows()) + " rows, model has " +
                std::to_string(n) + " vertices");
  }
  Points out = model.template_mesh.vertices;
  out += reshape_vertices(model.shape_basis * beta);
  out += reshape_vertices(model.pose_basis * pose_feature(theta));
  if (displacements.rows() != 0) out += displacements;
  return out;
}

Points joint_locations(const BodyModel& model, const Eigen::VectorXd& beta) {
  if (beta.size() != model.shape_count()) throw Error("beta size does not match model");
  const Points rest = model.template_mesh.vertices + reshape_vertices(model.shape_basis * beta);
  return model.joint_regressor * rest;
}

std::vector<Affine34> skinning_transforms(const BodyModel& model, const Eigen::VectorXd& beta,
                                          const PoseMatrix& theta) {
  check_params(model, beta, theta);
  const Points J = joint_locations(model, beta);
  const int K = model.joint_count();
  std::vector<Eigen::Matrix3d> R(K);
  std::vector<Eigen::Vector3d> t(K);
  std::vector<Affine34> out(K);
  for (int j = 0; j < K; ++j) {
    const Eigen::Matrix3d local = rodrigues(theta.row(j).transpose());
    const Eigen::Vector3d joint = J.row(j).transpose();
    if (model.parents[j] < 0) {
      R[j] = local;
      t[j] = joint;
    } else {
      const int p = model.parents[j];
      R[j] = R[p] * local;
      t[j] = R[p] * (joint - J.row(p).transpose()) + t[p];
    }
    out[j].leftCols<3>() = R[j];
    out[j].col(3) = t[j] - R[j] * joint;
  }
  return out;
}

std::vector<Affine34> blend_transforms(std::span<const Affine34> joint_transforms, const Eigen::MatrixXd& weights) {
  if (weights.cols() != static_cast<Eigen::Index>(joint_transforms.size())) {
    throw Error("skinning weights have " + std::to_string(weights.cols()) + " columns, expected " +
                std::to_string(joint_transforms.size()));
  }
  std::vector<Affine34> out(weights.rows(), Affine34::Zero());
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.cols(); ++j) {
      const double w = weights(i, j);
      if (w != 0.0) out[i] += w * joint_transforms[j];
    }
  }
  return out;
}

Points skin_points(const BodyModel& model, const BodyParams& params, const Points& rest_points,
                   const Eigen::MatrixXd& weights) {
  if (weights.rows() != rest_points.rows()) throw Error("skin_points: one weight row per point required");
  if (!params.trans.allFinite()) throw Error("translation is not finite");
  const auto G = skinning_transforms(model, params.beta, params.theta);
  const auto A = blend_transforms(G, weights);
  Points out(rest_points.rows(), 3);
  for (Eigen::Index i = 0; i < rest_points.rows(); ++i) {
    const Eigen::Vector3d x = rest_points.row(i).transpose();
    out.row(i) = (A[i].leftCols<3>() * x + A[i].col(3) + params.trans).transpose();
  }
  return out;
}

Points pose_mesh(const BodyModel& model, const BodyParams& params, const Points& displacements) {
  const Points rest = shaped_template(model, params.beta, params.theta, displacements);
  return skin_points(model, params, rest, model.weights);
}

Points unpose_vertices(const BodyModel& model, const BodyParams& params, const Points& posed_points,
                       const Eigen::MatrixXd& weights, std::span<const int> associated) {
  if (weights.rows() != posed_points.rows()) throw Error("unpose_vertices: one weight row per point required");
  if (!associated.empty() && static_cast<Eigen::Index>(associated.size()) != posed_points.rows()) {
    throw Error("unpose_vertices: association size does not match point count");
  }
  const auto G = skinning_transforms(model, params.beta, params.theta);
  const auto A = blend_transforms(G, weights);
  Points offsets;
  if (!associated.empty()) offsets = pose_offsets(model, params.theta);

  Points out(posed_points.rows(), 3);
  for (Eigen::Index i = 0; i < posed_points.rows(); ++i) {
    const Eigen::Matrix3d R = A[i].leftCols<3>();
    const double det = R.determinant();
    if (!(det > 1e-8)) {
      throw Error("unpose_vertices: blended transform of point " + std::to_string(i) + " is singular (det " +
                  std::to_string(det) + ")");
    }
    const Eigen::Vector3d y = posed_points.row(i).transpose() - params.trans - A[i].col(3);
    Eigen::Vector3d x = R.partialPivLu().solve(y);
    if (!associated.empty()) {
      const int v = associated[i];
      if (v < 0 || v >= model.vertex_count()) throw Error("unpose_vertices: association out of range");
      x -= offsets.row(v).transpose();
    }
    out.row(i) = x.transpose();
  }
  return out;
}

}  // namespace wardrobe
