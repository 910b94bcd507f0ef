#pragma once

#include "fixtures.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

namespace testing {

using namespace wardrobe;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

inline double max_row_distance(const Points& a, const Points& b) {
  REQUIRE(a.rows() == b.rows());
  return a.rows() == 0 ? 0.0 : (a - b).rowwise().norm().maxCoeff();
}

/// Distance from p to triangle abc by projection onto the plane, falling back
/// to the three edge segments when the projection leaves the triangle.
double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c);

/// Minimum of point_triangle_distance over every face.
double brute_force_distance(const TriMesh& mesh, const Eigen::Vector3d& p);

/// Shortest edge-path distances from `sources`.
std::vector<double> dijkstra(const TriMesh& mesh, const std::vector<int>& sources);

}  // namespace testing

namespace testing {

/// Linear blend skinning of `rest` written with homogeneous 4x4 joint chains.
Points lbs_oracle(const BodyModel& model, const BodyParams& params, const Points& rest,
                  const Eigen::MatrixXd& weights);

}  // namespace testing

namespace testing {

/// Shared 16-joint synthetic body.
const BodyModel& humanoid();

/// Random shape in [-2, 2], joint angles up to `max_angle`, translation in [-0.5, 0.5].
BodyParams random_params(const BodyModel& model, std::mt19937_64& rng, double max_angle);

}  // namespace testing
