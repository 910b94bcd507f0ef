#include "wardrobe/shape_space.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace wardrobe {
namespace {

Eigen::VectorXd flatten(const Points& p) { return Eigen::Map<const Eigen::VectorXd>(p.data(), p.size()); }

Points unflatten(const Eigen::VectorXd& v) { return Eigen::Map<const Points>(v.data(), v.size() / 3, 3); }

}  // namespace

PcaFitResult fit_pca(const std::vector<Points>& samples, int components, const std::string& garment_class) {
  if (samples.size() < 2) throw Error("fit_pca: at least 2 samples are required");
  if (components < 0) throw Error("fit_pca: component count must be nonnegative");
  const Eigen::Index m = samples.front().rows();
  for (size_t s = 0; s < samples.size(); ++s) {
    if (samples[s].rows() != m) {
      throw Error("fit_pca: sample " + std::to_string(s) + " has " + std::to_string(samples[s].rows()) +
                  " vertices, expected " + std::to_string(m));
    }
    if (!samples[s].allFinite()) throw Error("fit_pca: sample " + std::to_string(s) + " is not finite");
  }

  const auto count = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd X(3 * m, count);
  for (Eigen::Index s = 0; s < count; ++s) X.col(s) = flatten(samples[s]);
  const Eigen::VectorXd mean = X.rowwise().mean();
  X.colwise() -= mean;

  PcaFitResult result;
  int nc = components;
  const int max_nc = static_cast<int>(std::min<Eigen::Index>(count - 1, 3 * m));
  if (nc > max_nc) {
    result.warning = "requested " + std::to_string(components) + " components, clamped to " + std::to_string(max_nc);
    nc = max_nc;
  }

  const Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU);
  PcaShapeSpace& space = result.space;
  space.garment_class = garment_class;
  space.mean = unflatten(mean);
  space.basis = svd.matrixU().leftCols(nc);
  space.singular_values = svd.singularValues().head(nc);
  for (int c = 0; c < nc; ++c) {
    Eigen::Index arg = 0;
    space.basis.col(c).cwiseAbs().maxCoeff(&arg);
    if (space.basis(arg, c) < 0.0) space.basis.col(c) *= -1.0;
  }
  return result;
}

Encoding encode(const PcaShapeSpace& space, const Points& garment) {
  if (garment.rows() != space.vertex_count()) {
    throw Error("encode: garment has " + std::to_string(garment.rows()) + " vertices, shape space expects " +
                std::to_string(space.vertex_count()));
  }
  Encoding out;
  out.z = space.basis.transpose() * flatten(garment - space.mean);
  out.residual = garment - decode(space, out.z);
  for (Eigen::Index i = 0; i < out.residual.rows(); ++i) {
    const double norm = out.residual.row(i).norm();
    if (norm > space.residual_cap) {
      out.residual.row(i) *= space.residual_cap / norm;
      ++out.clipped;
    }
  }
  return out;
}

Points decode(const PcaShapeSpace& space, const Eigen::VectorXd& z, const Points& residual) {
  if (z.size() != space.component_count()) {
    throw Error("decode: z has " + std::to_string(z.size()) + " entries, shape space has " +
                std::to_string(space.component_count()) + " components");
  }
  Points out = space.mean + unflatten(space.basis * z);
  if (residual.rows() != 0) {
    if (residual.rows() != space.vertex_count()) throw Error("decode: residual row count mismatch");
    out += residual;
  }
  return out;
}

}  // namespace wardrobe
