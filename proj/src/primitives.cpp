#include "wardrobe/primitives.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace wardrobe {
namespace {

TriMesh from_lists(const std::vector<Eigen::Vector3d>& verts, const std::vector<std::array<int, 3>>& faces) {
  TriMesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = verts[i];
  mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.faces(static_cast<Eigen::Index>(f), k) = faces[f][k];
  return mesh;
}

}  // namespace

TriMesh make_tetrahedron() {
  return from_lists({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}},
                    {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

TriMesh make_octahedron(double radius) {
  const double r = radius;
  return from_lists({{r, 0, 0}, {-r, 0, 0}, {0, r, 0}, {0, -r, 0}, {0, 0, r}, {0, 0, -r}},
                    {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

TriMesh make_icosahedron(double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                                    {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                                    {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p = p.normalized() * radius;
  return from_lists(v, {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}});
}

TriMesh make_icosphere(int subdivisions, double radius) {
  TriMesh base = make_icosahedron(1.0);
  std::vector<Eigen::Vector3d> verts;
  for (int i = 0; i < base.vertex_count(); ++i) verts.emplace_back(base.vertices.row(i));
  std::vector<std::array<int, 3>> faces;
  for (int f = 0; f < base.face_count(); ++f) faces.push_back({base.faces(f, 0), base.faces(f, 1), base.faces(f, 2)});

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(faces.size() * 4);
    for (const auto& [a, b, c] : faces) {
      const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
      refined.push_back({a, ab, ca});
      refined.push_back({b, bc, ab});
      refined.push_back({c, ca, bc});
      refined.push_back({ab, bc, ca});
    }
    faces = std::move(refined);
  }
  for (auto& p : verts) p *= radius;
  return from_lists(verts, faces);
}

TriMesh make_box(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  std::vector<Eigen::Vector3d> v;
  for (int i = 0; i < 8; ++i) {
    v.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  return from_lists(v, {{0, 2, 3}, {0, 3, 1},   // z = lo
                        {4, 5, 7}, {4, 7, 6},   // z = hi
                        {0, 1, 5}, {0, 5, 4},   // y = lo
                        {2, 6, 7}, {2, 7, 3},   // y = hi
                        {0, 4, 6}, {0, 6, 2},   // x = lo
                        {1, 3, 7}, {1, 7, 5}}); // x = hi
}

TriMesh make_grid(int nx, int ny, double spacing) {
  std::vector<Eigen::Vector3d> v;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v.emplace_back(i * spacing, j * spacing, 0.0);
  std::vector<std::array<int, 3>> f;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int a = j * nx + i, b = a + 1, c = a + nx, d = c + 1;
      f.push_back({a, b, d});
      f.push_back({a, d, c});
    }
  }
  TriMesh mesh = from_lists(v, f);
  mesh.uvs.resize(mesh.vertex_count(), 2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.uvs.row(j * nx + i) << (nx > 1 ? double(i) / (nx - 1) : 0.0), (ny > 1 ? double(j) / (ny - 1) : 0.0);
  return mesh;
}

}  // namespace wardrobe
