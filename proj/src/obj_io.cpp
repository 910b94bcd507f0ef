#include "wardrobe/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace wardrobe {
namespace {

// Resolves a 1-based (or negative, relative) OBJ index against `count` items.
int resolve_index(const std::string& token, int count, int line_no, const std::string& what) {
  int value = 0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error("obj line " + std::to_string(line_no) + ": malformed " + what + " index '" + token + "'");
  }
  const int resolved = value > 0 ? value - 1 : count + value;
  if (value == 0 || resolved < 0 || resolved >= count) {
    throw Error("obj line " + std::to_string(line_no) + ": " + what + " index " + token +
                " out of range (have " + std::to_string(count) + ")");
  }
  return resolved;
}

}  // namespace

TriMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open obj file '" + path.string() + "'");

  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector2d> texcoords;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<int, 3>> face_uvs;
  bool any_uv = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) {
        throw Error("obj line " + std::to_string(line_no) + ": malformed vertex record");
      }
      positions.push_back(p);
    } else if (tag == "vt") {
      Eigen::Vector2d t;
      if (!(ss >> t.x() >> t.y())) {
        throw Error("obj line " + std::to_string(line_no) + ": malformed texture coordinate");
      }
      texcoords.push_back(t);
    } else if (tag == "f") {
      std::vector<int> vs, ts;
      std::string corner;
      while (ss >> corner) {
        const auto slash = corner.find('/');
        vs.push_back(resolve_index(corner.substr(0, slash), static_cast<int>(positions.size()), line_no,
                                   "vertex"));
        if (slash != std::string::npos) {
          const auto slash2 = corner.find('/', slash + 1);
          const std::string t = corner.substr(slash + 1, slash2 == std::string::npos ? std::string::npos
                                                                                      : slash2 - slash - 1);
          ts.push_back(t.empty() ? -1
                                 : resolve_index(t, static_cast<int>(texcoords.size()), line_no, "texture"));
        } else {
          ts.push_back(-1);
        }
      }
      if (vs.size() < 3) {
        throw Error("obj line " + std::to_string(line_no) + ": face with fewer than 3 vertices");
      }
      for (size_t k = 1; k + 1 < vs.size(); ++k) {
        faces.push_back({vs[0], vs[k], vs[k + 1]});
        face_uvs.push_back({ts[0], ts[k], ts[k + 1]});
        any_uv = any_uv || ts[0] >= 0 || ts[k] >= 0 || ts[k + 1] >= 0;
      }
    }
    // Normals, groups, materials and everything else are ignored.
  }

  TriMesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(positions.size()), 3);
  for (size_t i = 0; i < positions.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = positions[i];
  mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k) mesh.faces(static_cast<Eigen::Index>(f), k) = faces[f][k];

  if (any_uv) {
    // Per-vertex UVs: every corner of a vertex must reference the same texture coordinate.
    std::vector<int> uv_of_vertex(positions.size(), -1);
    for (size_t f = 0; f < faces.size(); ++f) {
      for (int k = 0; k < 3; ++k) {
        const int v = faces[f][k], t = face_uvs[f][k];
        if (t < 0) throw Error("obj '" + path.string() + "': face " + std::to_string(f) + " lacks a texture index");
        if (uv_of_vertex[v] >= 0 && texcoords[uv_of_vertex[v]] != texcoords[t]) {
          throw Error("obj '" + path.string() + "': vertex " + std::to_string(v + 1) +
                      " has conflicting texture coordinates (UV seams are not supported)");
        }
        uv_of_vertex[v] = t;
      }
    }
    mesh.uvs = UVs::Zero(static_cast<Eigen::Index>(positions.size()), 2);
    for (size_t v = 0; v < positions.size(); ++v)
      if (uv_of_vertex[v] >= 0) mesh.uvs.row(static_cast<Eigen::Index>(v)) = texcoords[uv_of_vertex[v]];
  }

  try {
    validate(mesh);
  } catch (const Error& e) {
    throw Error("obj '" + path.string() + "': " + e.what());
  }
  return mesh;
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::FILE* out = std::fopen(path.string().c_str(), "w");
  if (!out) throw Error("cannot write obj file '" + path.string() + "'");
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    std::fprintf(out, "v %.17g %.17g %.17g\n", mesh.vertices(v, 0), mesh.vertices(v, 1), mesh.vertices(v, 2));
  }
  const bool uv = mesh.has_uvs();
  if (uv) {
    for (int v = 0; v < mesh.vertex_count(); ++v) std::fprintf(out, "vt %.17g %.17g\n", mesh.uvs(v, 0), mesh.uvs(v, 1));
  }
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int a = mesh.faces(f, 0) + 1, b = mesh.faces(f, 1) + 1, c = mesh.faces(f, 2) + 1;
    if (uv) {
      std::fprintf(out, "f %d/%d %d/%d %d/%d\n", a, a, b, b, c, c);
    } else {
      std::fprintf(out, "f %d %d %d\n", a, b, c);
    }
  }
  const bool failed = std::ferror(out) != 0;
  std::fclose(out);
  if (failed) throw Error("error while writing obj file '" + path.string() + "'");
}

}  // namespace wardrobe
