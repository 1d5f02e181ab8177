#include "convexvar/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace cvx {

namespace {

// vertices of the regular icosahedron, unit norm
std::vector<Vec3> icosahedron_vertices() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  return v;
}

std::vector<std::array<int, 3>> icosahedron_faces() {
  return {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
          {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
          {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
          {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
}

}  // namespace

SphereMesh build_sphere_mesh(int subdivision_level) {
  if (subdivision_level < 0) throw std::invalid_argument("build_sphere_mesh: level >= 0");
  std::vector<Vec3> verts = icosahedron_vertices();
  std::vector<std::array<int, 3>> faces = icosahedron_faces();

  for (int l = 0; l < subdivision_level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[a] + verts[b]).normalized();
      int id = static_cast<int>(verts.size());
      verts.push_back(m);
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces.swap(next);
  }

  SphereMesh s;
  s.directions = std::move(verts);
  s.triangles = std::move(faces);

  // the icosahedron is centrally symmetric and midpoint subdivision keeps it
  // so; pair directions with their negations
  const int n = s.count();
  s.antipode.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (s.antipode[i] >= 0) continue;
    int best = -1;
    double best_d = 1e9;
    for (int j = 0; j < n; ++j) {
      double d = (s.directions[i] + s.directions[j]).norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best_d > 1e-9) throw std::runtime_error("build_sphere_mesh: antipode missing");
    s.antipode[i] = best;
    s.antipode[best] = i;
  }
  s.build_lookup();
  return s;
}

void SphereMesh::build_lookup() {
  tri_of_vertex_.assign(count(), {});
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t)
    for (int k = 0; k < 3; ++k) tri_of_vertex_[triangles[t][k]].push_back(t);
}

EvalRow SphereMesh::interpolation_row(const Vec3& unit_dir) const {
  // candidate triangles: those around the nearest direction
  int nearest = 0;
  double best = -2;
  for (int i = 0; i < count(); ++i) {
    double d = directions[i].dot(unit_dir);
    if (d > best) {
      best = d;
      nearest = i;
    }
  }
  const std::vector<int>& cand = tri_of_vertex_[nearest];
  int best_t = -1;
  Eigen::Vector3d best_l;
  double best_def = 1e9;
  auto consider = [&](int t) {
    const auto& f = triangles[t];
    Eigen::Matrix3d V;
    V.col(0) = directions[f[0]];
    V.col(1) = directions[f[1]];
    V.col(2) = directions[f[2]];
    Eigen::Vector3d mu = V.partialPivLu().solve(unit_dir);
    double sum = mu.sum();
    if (std::abs(sum) < 1e-12) return;
    Eigen::Vector3d lam = mu / sum;
    double deficit = std::max({-lam[0], -lam[1], -lam[2], 0.0});
    if (deficit < best_def) {
      best_def = deficit;
      best_t = t;
      best_l = lam;
    }
  };
  for (int t : cand) consider(t);
  if (best_def > 1e-9) {  // widen: triangles of the candidate triangles' vertices
    for (int t : cand)
      for (int k = 0; k < 3; ++k)
        for (int t2 : tri_of_vertex_[triangles[t][k]]) consider(t2);
  }
  if (best_t < 0 || best_def > 1e-6)
    throw std::runtime_error("SphereMesh::interpolation_row: direction not covered");
  EvalRow row;
  const auto& f = triangles[best_t];
  for (int k = 0; k < 3; ++k) {
    row.idx.push_back(f[k]);
    row.w.push_back(std::max(best_l[k], 0.0));
  }
  double sum = row.w[0] + row.w[1] + row.w[2];
  for (auto& w : row.w) w /= sum;
  for (size_t a = 0; a < row.idx.size(); ++a)
    for (size_t b = a + 1; b < row.idx.size(); ++b)
      if (row.idx[b] < row.idx[a]) {
        std::swap(row.idx[a], row.idx[b]);
        std::swap(row.w[a], row.w[b]);
      }
  return row;
}

Eigen::VectorXd SphereMesh::area_weights() const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(count());
  for (const auto& f : triangles) {
    // spherical triangle area via l'Huilier
    const Vec3 &a = directions[f[0]], &b = directions[f[1]], &c = directions[f[2]];
    double ab = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    double bc = std::acos(std::clamp(b.dot(c), -1.0, 1.0));
    double ca = std::acos(std::clamp(c.dot(a), -1.0, 1.0));
    double s = 0.5 * (ab + bc + ca);
    double t = std::tan(s / 2) * std::tan((s - ab) / 2) * std::tan((s - bc) / 2) *
               std::tan((s - ca) / 2);
    double area = 4.0 * std::atan(std::sqrt(std::max(t, 0.0)));
    for (int k = 0; k < 3; ++k) w[f[k]] += area / 3.0;
  }
  return w;
}

std::vector<GreatCircleSample> sample_great_circles(int count, double eps, uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_great_circles: count >= 1");
  if (!(eps > 0) || !(eps < M_PI / 2))
    throw std::invalid_argument("sample_great_circles: 0 < eps < pi/2");

  // deterministic rotation offset from the seed
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  const double offset = 2.0 * M_PI * (static_cast<double>(seed % 360360) / 360360.0);

  std::vector<GreatCircleSample> out;
  out.reserve(count);
  const int n = std::max(4, static_cast<int>(std::llround(2.0 * M_PI / eps)));
  const double step = 2.0 * M_PI / n;
  for (int i = 0; i < count; ++i) {
    GreatCircleSample c;
    double z = count == 1 ? 1.0 : 1.0 - 2.0 * (i + 0.5) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = golden * i + offset;
    c.normal = Vec3(r * std::cos(th), r * std::sin(th), z);
    // orthonormal frame in the circle plane
    Vec3 u = std::abs(c.normal.z()) < 0.9 ? Vec3(0, 0, 1).cross(c.normal).normalized()
                                          : Vec3(1, 0, 0).cross(c.normal).normalized();
    Vec3 v = c.normal.cross(u);
    c.eps = step;
    c.weight = std::cos(step);
    c.points.reserve(n);
    for (int k = 0; k < n; ++k)
      c.points.push_back(u * std::cos(step * k) + v * std::sin(step * k));
    out.push_back(std::move(c));
  }
  return out;
}

void write_sphere_csv(const SphereMesh& sphere, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  os << "x,y,z,antipode\n";
  for (int i = 0; i < sphere.count(); ++i) {
    const Vec3& d = sphere.directions[i];
    os << d.x() << "," << d.y() << "," << d.z() << "," << sphere.antipode[i] << "\n";
  }
}

}  // namespace cvx
