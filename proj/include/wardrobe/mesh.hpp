#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wardrobe {

/// Row-major point set, one 3D point (meters) per row.
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;
using UVs = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

using Edge = std::array<int, 2>;
using Loop = std::vector<int>;

/// Domain failure: bad input data, violated preconditions on content, solver breakdown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Indexed triangle mesh. UVs are per vertex and either empty or one row per vertex.
struct TriMesh {
  Points vertices;
  Faces faces;
  UVs uvs;

  [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices.rows()); }
  [[nodiscard]] int face_count() const { return static_cast<int>(faces.rows()); }
  [[nodiscard]] bool has_uvs() const { return uvs.rows() > 0; }
};

/// Throws Error unless indices are in range, faces are non-degenerate in
/// connectivity, and the mesh is an oriented manifold (possibly with boundary).
void validate(const TriMesh& mesh);

TriMesh load_obj(const std::filesystem::path& path);
void save_obj(const TriMesh& mesh, const std::filesystem::path& path);

/// Undirected edges, each listed once with edge[0] < edge[1], sorted.
std::vector<Edge> unique_edges(const TriMesh& mesh);

/// Sorted neighbor lists.
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh);

/// Closed boundary cycles in face-winding order. Each loop starts at its
/// smallest vertex id; loops are sorted by that id.
std::vector<Loop> boundary_loops(const TriMesh& mesh);

/// Per-vertex component id in [0, count); isolated vertices get their own id.
struct Components {
  std::vector<int> id;
  int count = 0;
};
Components connected_components(const TriMesh& mesh);

int euler_characteristic(const TriMesh& mesh);

Eigen::Vector3d face_normal(const TriMesh& mesh, int face);  // unit, or zero if degenerate
double face_area(const TriMesh& mesh, int face);

/// Area-weighted unit vertex normals.
Points vertex_normals(const TriMesh& mesh);

double mean_edge_length(const TriMesh& mesh);

/// Faces selected by `keep`, compacted. `vertex_map[i]` is the source index of
/// output vertex i.
struct Submesh {
  TriMesh mesh;
  std::vector<int> vertex_map;
};
Submesh extract_submesh(const TriMesh& mesh, std::span<const char> keep_face);

/// Gathers rows of `points` by index.
Points gather_rows(const Points& points, std::span<const int> index);

}  // namespace wardrobe
