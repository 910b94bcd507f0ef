#pragma once

#include "wardrobe/mesh.hpp"

#include <Eigen/Geometry>

#include <unordered_map>
#include <vector>

namespace wardrobe {

struct SurfacePoint {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  int face = -1;
  double distance = 0.0;
  /// (query - point) . pseudonormal(point) < 0. Points on the surface are outside.
  bool inside = false;
};

/// Axis-aligned bounding-volume hierarchy over the faces of a mesh with
/// angle-weighted pseudonormals for inside/outside classification.
/// Immutable after construction; queries are const and thread-safe.
class SurfaceBVH {
 public:
  explicit SurfaceBVH(TriMesh mesh);

  /// Exact nearest point over all faces. Throws Error for a mesh without faces.
  [[nodiscard]] SurfacePoint closest_point(const Eigen::Vector3d& query) const;

  [[nodiscard]] const TriMesh& mesh() const { return mesh_; }

 private:
  struct Node {
    Eigen::AlignedBox3d box;
    int left = -1;
    int right = -1;
    int first = 0;
    int count = 0;
  };

  int build(int first, int count, std::vector<Eigen::Vector3d>& centroids);

  TriMesh mesh_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Eigen::Vector3d> face_normals_;
  std::vector<Eigen::Vector3d> vertex_normals_;
  std::unordered_map<std::uint64_t, Eigen::Vector3d> edge_normals_;
};

/// Which feature of a triangle a closest point lies on.
enum class TriangleFeature { Vertex0, Vertex1, Vertex2, Edge01, Edge12, Edge20, Interior };

struct TrianglePoint {
  Eigen::Vector3d point;
  TriangleFeature feature;
};

TrianglePoint closest_point_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                        const Eigen::Vector3d& b, const Eigen::Vector3d& c);

/// Exact nearest-neighbor search over a point set (k-d tree). Ties on distance
/// resolve to the lowest index, so results match a brute-force scan bitwise.
class PointIndex {
 public:
  explicit PointIndex(Points points);

  struct Hit {
    int index = -1;
    double squared_distance = 0.0;
  };
  [[nodiscard]] Hit nearest(const Eigen::Vector3d& query) const;

  [[nodiscard]] const Points& points() const { return points_; }

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };
  int build(std::vector<int>& ids, int first, int last, int depth);
  void search(int node, const Eigen::Vector3d& q, Hit& best) const;

  Points points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Brute-force nearest point index with lowest-index tie breaking.
PointIndex::Hit nearest_point_brute_force(const Points& points, const Eigen::Vector3d& query);

}  // namespace wardrobe
