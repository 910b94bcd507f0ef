#include "wardrobe/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace wardrobe {
namespace {

constexpr double kNearPlane = 1e-9;
constexpr double kDepthTie = 1e-9;

double edge(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

}  // namespace

LabelImage rasterize_labels(const std::vector<LabeledMesh>& meshes, const Camera& camera, int width, int height) {
  camera.validate();
  LabelImage image(width, height);
  image.camera = camera;
  image.legend = {"background"};
  for (const auto& m : meshes) {
    if (m.label < 0) throw Error("rasterize_labels: negative mesh label");
    const auto slot = static_cast<size_t>(m.label) + 1;
    if (image.legend.size() <= slot) image.legend.resize(slot + 1);
    image.legend[slot] = m.name;
  }
  std::vector<double> inv_depth(static_cast<size_t>(width) * height, 0.0);

  for (const auto& m : meshes) {
    const int value = m.label + 1;
    const int nv = m.mesh.vertex_count();
    std::vector<Eigen::Vector2d> screen(nv);
    std::vector<double> inv_z(nv);
    for (int v = 0; v < nv; ++v) {
      const Eigen::Vector3d c = camera.to_camera(m.mesh.vertices.row(v).transpose());
      inv_z[v] = c.z() > kNearPlane ? 1.0 / c.z() : 0.0;
      screen[v] = {camera.focal * c.x() * inv_z[v] + camera.cx, camera.focal * c.y() * inv_z[v] + camera.cy};
    }
    for (int f = 0; f < m.mesh.face_count(); ++f) {
      const int i0 = m.mesh.faces(f, 0), i1 = m.mesh.faces(f, 1), i2 = m.mesh.faces(f, 2);
      if (inv_z[i0] == 0.0 || inv_z[i1] == 0.0 || inv_z[i2] == 0.0) continue;
      const Eigen::Vector2d &p0 = screen[i0], &p1 = screen[i1], &p2 = screen[i2];
      const double area = edge(p0, p1, p2);
      if (area == 0.0 || !std::isfinite(area)) continue;
      const double sign = area > 0.0 ? 1.0 : -1.0;

      const double min_x = std::min({p0.x(), p1.x(), p2.x()}), max_x = std::max({p0.x(), p1.x(), p2.x()});
      const double min_y = std::min({p0.y(), p1.y(), p2.y()}), max_y = std::max({p0.y(), p1.y(), p2.y()});
      const int x_begin = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
      const int x_end = std::min(width - 1, static_cast<int>(std::floor(max_x - 0.5)));
      const int y_begin = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
      const int y_end = std::min(height - 1, static_cast<int>(std::floor(max_y - 0.5)));

      for (int y = y_begin; y <= y_end; ++y) {
        for (int x = x_begin; x <= x_end; ++x) {
          const Eigen::Vector2d c(x + 0.5, y + 0.5);
          const double w0 = sign * edge(p1, p2, c), w1 = sign * edge(p2, p0, c), w2 = sign * edge(p0, p1, c);
          if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
          const double depth = (w0 * inv_z[i0] + w1 * inv_z[i1] + w2 * inv_z[i2]) / (sign * area);
          const size_t p = static_cast<size_t>(y) * width + x;
          const double best = inv_depth[p];
          const bool closer = depth > best * (1.0 + kDepthTie);
          const bool tie_wins = std::abs(depth - best) <= kDepthTie * best && value > image.labels[p];
          if (closer || tie_wins) {
            inv_depth[p] = depth;
            image.labels[p] = value;
          }
        }
      }
    }
  }
  return image;
}

}  // namespace wardrobe
