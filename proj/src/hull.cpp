#include "convexvar/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cvx {

std::vector<int> convex_hull_2d(const std::vector<Eigen::Vector3d>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw std::runtime_error("convex_hull_2d: need >= 3 points");
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts[a].x() != pts[b].x()) return pts[a].x() < pts[b].x();
    return pts[a].y() < pts[b].y();
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a].x() - pts[o].x()) * (pts[b].y() - pts[o].y()) -
           (pts[a].y() - pts[o].y()) * (pts[b].x() - pts[o].x());
  };
  std::vector<int> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], order[i]) <= 0) --k;
    hull[k++] = order[i];
  }
  for (int i = n - 2, lo = k + 1; i >= 0; --i) {  // upper
    while (k >= lo && cross(hull[k - 2], hull[k - 1], order[i]) <= 0) --k;
    hull[k++] = order[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<std::array<int, 3>> convex_hull_3d(const std::vector<Eigen::Vector3d>& pts) {
  using Vec3 = Eigen::Vector3d;
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw std::runtime_error("convex_hull_3d: need >= 4 points");

  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = std::max((hi - lo).norm(), 1e-300);
  const double eps = 1e-10 * scale;

  // initial simplex from extreme points
  int i0 = 0, i1 = 0;
  for (int i = 0; i < n; ++i) {
    if (pts[i].x() < pts[i0].x()) i0 = i;
    if (pts[i].x() > pts[i1].x()) i1 = i;
  }
  if ((pts[i1] - pts[i0]).norm() < eps) {
    for (int i = 0; i < n; ++i)
      if ((pts[i] - pts[i0]).norm() > (pts[i1] - pts[i0]).norm()) i1 = i;
  }
  if ((pts[i1] - pts[i0]).norm() < eps) throw std::runtime_error("convex_hull_3d: degenerate");
  int i2 = -1;
  double best = eps;
  const Vec3 d01 = (pts[i1] - pts[i0]).normalized();
  for (int i = 0; i < n; ++i) {
    double dist = ((pts[i] - pts[i0]) - d01.dot(pts[i] - pts[i0]) * d01).norm();
    if (dist > best) {
      best = dist;
      i2 = i;
    }
  }
  if (i2 < 0) throw std::runtime_error("convex_hull_3d: collinear input");
  Vec3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
  int i3 = -1;
  best = eps * nrm.norm();
  for (int i = 0; i < n; ++i) {
    double dist = std::abs(nrm.dot(pts[i] - pts[i0]));
    if (dist > best) {
      best = dist;
      i3 = i;
    }
  }
  if (i3 < 0) throw std::runtime_error("convex_hull_3d: coplanar input");

  struct Face {
    int a, b, c;
    Vec3 n;
    double off;
    bool dead = false;
  };
  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c) {
    Face f;
    f.a = a;
    f.b = b;
    f.c = c;
    f.n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    f.off = f.n.dot(pts[a]);
    faces.push_back(f);
    return static_cast<int>(faces.size()) - 1;
  };

  // orient the first tet
  if (nrm.dot(pts[i3] - pts[i0]) > 0) std::swap(i1, i2);
  add_face(i0, i1, i2);
  add_face(i0, i3, i1);
  add_face(i1, i3, i2);
  add_face(i2, i3, i0);

  auto visible = [&](const Face& f, const Vec3& p) {
    return f.n.dot(p) - f.off > eps * f.n.norm();
  };

  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    const Vec3& p = pts[i];
    std::vector<int> vis;
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
      if (!faces[fi].dead && visible(faces[fi], p)) vis.push_back(fi);
    if (vis.empty()) continue;
    // horizon: directed edges of visible faces whose twin face is hidden
    std::map<std::pair<int, int>, int> edge_count;
    for (int fi : vis) {
      const Face& f = faces[fi];
      int e[3][2] = {{f.a, f.b}, {f.b, f.c}, {f.c, f.a}};
      for (auto& ed : e) edge_count[{ed[0], ed[1]}] = 1;
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& [ed, cnt] : edge_count)
      if (!edge_count.count({ed.second, ed.first})) horizon.push_back(ed);
    for (int fi : vis) faces[fi].dead = true;
    for (const auto& ed : horizon) add_face(ed.first, ed.second, i);
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& f : faces)
    if (!f.dead) out.push_back({f.a, f.b, f.c});
  return out;
}

}  // namespace cvx
