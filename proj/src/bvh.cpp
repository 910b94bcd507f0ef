#include "wardrobe/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wardrobe {
namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

double box_squared_distance(const Eigen::AlignedBox3d& box, const Eigen::Vector3d& p) {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (p[k] < box.min()[k]) {
      const double d = box.min()[k] - p[k];
      d2 += d * d;
    } else if (p[k] > box.max()[k]) {
      const double d = p[k] - box.max()[k];
      d2 += d * d;
    }
  }
  return d2;
}

double corner_angle(const Eigen::Vector3d& at, const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  const Eigen::Vector3d a = u - at, b = v - at;
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

TrianglePoint closest_point_on_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                        const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  // Voronoi-region walk (Ericson, Real-Time Collision Detection 5.1.5).
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, TriangleFeature::Vertex0};

  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, TriangleFeature::Vertex1};

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {a + v * ab, TriangleFeature::Edge01};
  }

  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, TriangleFeature::Vertex2};

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {a + w * ac, TriangleFeature::Edge20};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + w * (c - b), TriangleFeature::Edge12};
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return {a + ab * v + ac * w, TriangleFeature::Interior};
}

SurfaceBVH::SurfaceBVH(TriMesh mesh) : mesh_(std::move(mesh)) {
  const int nf = mesh_.face_count();
  face_normals_.resize(nf);
  vertex_normals_.assign(mesh_.vertex_count(), Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> centroids(nf);
  for (int f = 0; f < nf; ++f) {
    const Eigen::Vector3d a = mesh_.vertices.row(mesh_.faces(f, 0));
    const Eigen::Vector3d b = mesh_.vertices.row(mesh_.faces(f, 1));
    const Eigen::Vector3d c = mesh_.vertices.row(mesh_.faces(f, 2));
    const Eigen::Vector3d n = face_normal(mesh_, f);
    face_normals_[f] = n;
    centroids[f] = (a + b + c) / 3.0;
    vertex_normals_[mesh_.faces(f, 0)] += corner_angle(a, b, c) * n;
    vertex_normals_[mesh_.faces(f, 1)] += corner_angle(b, c, a) * n;
    vertex_normals_[mesh_.faces(f, 2)] += corner_angle(c, a, b) * n;
    for (int k = 0; k < 3; ++k) {
      const auto key = edge_key(mesh_.faces(f, k), mesh_.faces(f, (k + 1) % 3));
      edge_normals_.try_emplace(key, Eigen::Vector3d::Zero()).first->second += n;
    }
  }
  for (auto& n : vertex_normals_) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  for (auto& [key, n] : edge_normals_) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  order_.resize(nf);
  std::iota(order_.begin(), order_.end(), 0);
  if (nf > 0) {
    nodes_.reserve(2 * static_cast<size_t>(nf));
    build(0, nf, centroids);
  }
}

int SurfaceBVH::build(int first, int count, std::vector<Eigen::Vector3d>& centroids) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d centroid_box;
  for (int i = first; i < first + count; ++i) {
    const int f = order_[i];
    for (int k = 0; k < 3; ++k) box.extend(Eigen::Vector3d(mesh_.vertices.row(mesh_.faces(f, k))));
    centroid_box.extend(centroids[f]);
  }
  nodes_[index].box = box;
  constexpr int kLeafSize = 4;
  if (count <= kLeafSize) {
    nodes_[index].first = first;
    nodes_[index].count = count;
    return index;
  }
  int axis = 0;
  centroid_box.sizes().maxCoeff(&axis);
  const int half = count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + first + half, order_.begin() + first + count,
                   [&](int a, int b) {
                     if (centroids[a][axis] != centroids[b][axis]) return centroids[a][axis] < centroids[b][axis];
                     return a < b;
                   });
  const int left = build(first, half, centroids);
  const int right = build(first + half, count - half, centroids);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

SurfacePoint SurfaceBVH::closest_point(const Eigen::Vector3d& query) const {
  if (nodes_.empty()) throw Error("closest_point: mesh has no faces");
  double best = std::numeric_limits<double>::infinity();
  int best_face = -1;
  TrianglePoint best_point{Eigen::Vector3d::Zero(), TriangleFeature::Interior};

  std::vector<int> stack;
  stack.reserve(64);
  stack.push_back(0);
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_squared_distance(node.box, query) > best) continue;
    if (node.left < 0) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int f = order_[i];
        const TrianglePoint tp = closest_point_on_triangle(
            query, mesh_.vertices.row(mesh_.faces(f, 0)).transpose(), mesh_.vertices.row(mesh_.faces(f, 1)).transpose(),
            mesh_.vertices.row(mesh_.faces(f, 2)).transpose());
        const double d2 = (tp.point - query).squaredNorm();
        if (d2 < best || (d2 == best && f < best_face)) {
          best = d2;
          best_face = f;
          best_point = tp;
        }
      }
      continue;
    }
    const double dl = box_squared_distance(nodes_[node.left].box, query);
    const double dr = box_squared_distance(nodes_[node.right].box, query);
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }

  Eigen::Vector3d normal;
  const auto vertex = [&](int k) { return mesh_.faces(best_face, k); };
  switch (best_point.feature) {
    case TriangleFeature::Vertex0: normal = vertex_normals_[vertex(0)]; break;
    case TriangleFeature::Vertex1: normal = vertex_normals_[vertex(1)]; break;
    case TriangleFeature::Vertex2: normal = vertex_normals_[vertex(2)]; break;
    case TriangleFeature::Edge01: normal = edge_normals_.at(edge_key(vertex(0), vertex(1))); break;
    case TriangleFeature::Edge12: normal = edge_normals_.at(edge_key(vertex(1), vertex(2))); break;
    case TriangleFeature::Edge20: normal = edge_normals_.at(edge_key(vertex(2), vertex(0))); break;
    case TriangleFeature::Interior: normal = face_normals_[best_face]; break;
  }
  SurfacePoint out;
  out.point = best_point.point;
  out.face = best_face;
  out.distance = std::sqrt(best);
  out.inside = (query - best_point.point).dot(normal) < 0.0;
  return out;
}

PointIndex::PointIndex(Points points) : points_(std::move(points)) {
  std::vector<int> ids(points_.rows());
  std::iota(ids.begin(), ids.end(), 0);
  nodes_.reserve(ids.size());
  if (!ids.empty()) root_ = build(ids, 0, static_cast<int>(ids.size()), 0);
}

int PointIndex::build(std::vector<int>& ids, int first, int last, int depth) {
  if (first >= last) return -1;
  const int axis = depth % 3;
  const int mid = first + (last - first) / 2;
  std::nth_element(ids.begin() + first, ids.begin() + mid, ids.begin() + last, [&](int a, int b) {
    if (points_(a, axis) != points_(b, axis)) return points_(a, axis) < points_(b, axis);
    return a < b;
  });
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back({ids[mid], axis, -1, -1});
  const int left = build(ids, first, mid, depth + 1);
  const int right = build(ids, mid + 1, last, depth + 1);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

void PointIndex::search(int node, const Eigen::Vector3d& q, Hit& best) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const double d2 = (points_.row(n.point).transpose() - q).squaredNorm();
  if (d2 < best.squared_distance || (d2 == best.squared_distance && n.point < best.index)) {
    best = {n.point, d2};
  }
  const double delta = q[n.axis] - points_(n.point, n.axis);
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search(near, q, best);
  // Equality keeps the far side reachable for lowest-index tie breaking.
  if (delta * delta <= best.squared_distance) search(far, q, best);
}

PointIndex::Hit PointIndex::nearest(const Eigen::Vector3d& query) const {
  if (root_ < 0) throw Error("PointIndex::nearest: empty point set");
  Hit best{-1, std::numeric_limits<double>::infinity()};
  search(root_, query, best);
  return best;
}

PointIndex::Hit nearest_point_brute_force(const Points& points, const Eigen::Vector3d& query) {
  if (points.rows() == 0) throw Error("nearest_point_brute_force: empty point set");
  PointIndex::Hit best{-1, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < points.rows(); ++i) {
    const double d2 = (points.row(i).transpose() - query).squaredNorm();
    if (d2 < best.squared_distance) best = {i, d2};
  }
  return best;
}

}  // namespace wardrobe
