#include "wardrobe/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace wardrobe {
namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

void validate(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  if (mesh.has_uvs() && mesh.uvs.rows() != n) {
    throw Error("mesh: uv count " + std::to_string(mesh.uvs.rows()) +
                " does not match vertex count " + std::to_string(n));
  }
  if (!mesh.vertices.allFinite()) throw Error("mesh: non-finite vertex coordinate");

  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(static_cast<size_t>(mesh.face_count()) * 3);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.faces(f, k);
      if (v < 0 || v >= n) {
        throw Error("mesh: face " + std::to_string(f) + " vertex index " + std::to_string(v) +
                    " out of range [0, " + std::to_string(n) + ")");
      }
    }
    const int a = mesh.faces(f, 0), b = mesh.faces(f, 1), c = mesh.faces(f, 2);
    if (a == b || b == c || a == c) {
      throw Error("mesh: face " + std::to_string(f) + " repeats a vertex");
    }
    for (int k = 0; k < 3; ++k) {
      const int u = mesh.faces(f, k), w = mesh.faces(f, (k + 1) % 3);
      if (!directed.emplace(edge_key(u, w), f).second) {
        throw Error("mesh: edge (" + std::to_string(u) + ", " + std::to_string(w) +
                    ") is non-manifold or inconsistently oriented (faces " +
                    std::to_string(directed[edge_key(u, w)]) + " and " + std::to_string(f) + ")");
      }
    }
  }

  // Every vertex must have a single fan of incident faces.
  std::vector<std::vector<int>> incident(n);
  for (int f = 0; f < mesh.face_count(); ++f)
    for (int k = 0; k < 3; ++k) incident[mesh.faces(f, k)].push_back(f);
  for (int v = 0; v < n; ++v) {
    const auto& fan = incident[v];
    if (fan.size() < 2) continue;
    std::vector<int> parent(fan.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::map<int, int> first_by_neighbor;
    for (size_t i = 0; i < fan.size(); ++i) {
      for (int k = 0; k < 3; ++k) {
        const int w = mesh.faces(fan[i], k);
        if (w == v) continue;
        auto [it, inserted] = first_by_neighbor.emplace(w, static_cast<int>(i));
        if (!inserted) parent[find_root(parent, static_cast<int>(i))] = find_root(parent, it->second);
      }
    }
    const int root = find_root(parent, 0);
    for (size_t i = 1; i < fan.size(); ++i) {
      if (find_root(parent, static_cast<int>(i)) != root) {
        throw Error("mesh: vertex " + std::to_string(v) + " is non-manifold");
      }
    }
  }
}

std::vector<Edge> unique_edges(const TriMesh& mesh) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(mesh.face_count()) * 3);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = mesh.faces(f, k), b = mesh.faces(f, (k + 1) % 3);
      if (a > b) std::swap(a, b);
      edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh) {
  std::vector<std::vector<int>> nbrs(mesh.vertex_count());
  for (const auto& [a, b] : unique_edges(mesh)) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  for (auto& list : nbrs) std::sort(list.begin(), list.end());
  return nbrs;
}

std::vector<Loop> boundary_loops(const TriMesh& mesh) {
  std::unordered_map<std::uint64_t, int> count;
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.faces(f, k), b = mesh.faces(f, (k + 1) % 3);
      ++count[edge_key(std::min(a, b), std::max(a, b))];
    }
  }
  // next[a] = b for each boundary half-edge a->b.
  std::map<int, int> next;
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.faces(f, k), b = mesh.faces(f, (k + 1) % 3);
      if (count[edge_key(std::min(a, b), std::max(a, b))] == 1) next[a] = b;
    }
  }
  std::vector<Loop> loops;
  std::vector<char> used(mesh.vertex_count(), 0);
  for (const auto& [start, unused] : next) {
    if (used[start]) continue;
    Loop loop;
    int v = start;
    while (!used[v]) {
      used[v] = 1;
      loop.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) throw Error("mesh: open boundary chain at vertex " + std::to_string(v));
      v = it->second;
    }
    if (v != start) throw Error("mesh: boundary is not a simple cycle near vertex " + std::to_string(v));
    loops.push_back(std::move(loop));
  }
  return loops;
}

Components connected_components(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int r0 = find_root(parent, mesh.faces(f, 0));
    for (int k = 1; k < 3; ++k) {
      const int r = find_root(parent, mesh.faces(f, k));
      if (r != r0) parent[std::max(r, r0)] = std::min(r, r0);
    }
  }
  Components out;
  out.id.assign(n, -1);
  std::vector<int> label_of_root(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = find_root(parent, v);
    if (label_of_root[r] < 0) label_of_root[r] = out.count++;
    out.id[v] = label_of_root[r];
  }
  return out;
}

int euler_characteristic(const TriMesh& mesh) {
  return mesh.vertex_count() - static_cast<int>(unique_edges(mesh).size()) + mesh.face_count();
}

Eigen::Vector3d face_normal(const TriMesh& mesh, int face) {
  const Eigen::Vector3d a = mesh.vertices.row(mesh.faces(face, 0));
  const Eigen::Vector3d b = mesh.vertices.row(mesh.faces(face, 1));
  const Eigen::Vector3d c = mesh.vertices.row(mesh.faces(face, 2));
  const Eigen::Vector3d n = (b - a).cross(c - a);
  const double len = n.norm();
  return len > 0.0 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::Zero();
}

double face_area(const TriMesh& mesh, int face) {
  const Eigen::Vector3d a = mesh.vertices.row(mesh.faces(face, 0));
  const Eigen::Vector3d b = mesh.vertices.row(mesh.faces(face, 1));
  const Eigen::Vector3d c = mesh.vertices.row(mesh.faces(face, 2));
  return 0.5 * (b - a).cross(c - a).norm();
}

Points vertex_normals(const TriMesh& mesh) {
  Points normals = Points::Zero(mesh.vertex_count(), 3);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Eigen::Vector3d a = mesh.vertices.row(mesh.faces(f, 0));
    const Eigen::Vector3d b = mesh.vertices.row(mesh.faces(f, 1));
    const Eigen::Vector3d c = mesh.vertices.row(mesh.faces(f, 2));
    const Eigen::RowVector3d weighted = (b - a).cross(c - a).transpose();
    for (int k = 0; k < 3; ++k) normals.row(mesh.faces(f, k)) += weighted;
  }
  for (int v = 0; v < normals.rows(); ++v) {
    const double len = normals.row(v).norm();
    if (len > 0.0) normals.row(v) /= len;
  }
  return normals;
}

double mean_edge_length(const TriMesh& mesh) {
  const auto edges = unique_edges(mesh);
  if (edges.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [a, b] : edges) total += (mesh.vertices.row(a) - mesh.vertices.row(b)).norm();
  return total / static_cast<double>(edges.size());
}

Submesh extract_submesh(const TriMesh& mesh, std::span<const char> keep_face) {
  if (static_cast<int>(keep_face.size()) != mesh.face_count()) {
    throw Error("extract_submesh: face mask size mismatch");
  }
  std::vector<int> new_index(mesh.vertex_count(), -1);
  Submesh out;
  std::vector<std::array<int, 3>> faces;
  for (int f = 0; f < mesh.face_count(); ++f) {
    if (!keep_face[f]) continue;
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.faces(f, k);
      if (new_index[v] < 0) {
        new_index[v] = static_cast<int>(out.vertex_map.size());
        out.vertex_map.push_back(v);
      }
      tri[k] = new_index[v];
    }
    faces.push_back(tri);
  }
  out.mesh.vertices = gather_rows(mesh.vertices, out.vertex_map);
  out.mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k) out.mesh.faces(static_cast<Eigen::Index>(f), k) = faces[f][k];
  if (mesh.has_uvs()) {
    out.mesh.uvs.resize(static_cast<Eigen::Index>(out.vertex_map.size()), 2);
    for (size_t i = 0; i < out.vertex_map.size(); ++i)
      out.mesh.uvs.row(static_cast<Eigen::Index>(i)) = mesh.uvs.row(out.vertex_map[i]);
  }
  return out;
}

Points gather_rows(const Points& points, std::span<const int> index) {
  Points out(static_cast<Eigen::Index>(index.size()), 3);
  for (size_t i = 0; i < index.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points.row(index[i]);
  return out;
}

}  // namespace wardrobe
