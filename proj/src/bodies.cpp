#include "convexvar/bodies.hpp"

#include "convexvar/hull.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace cvx {

Polytope polytope_from_points(const std::vector<Vec3>& pts) {
  auto faces = convex_hull_3d(pts);
  // keep only vertices referenced by the hull
  std::map<int, int> remap;
  Polytope P;
  P.dim = 3;
  for (auto& f : faces)
    for (int k = 0; k < 3; ++k) {
      auto [it, fresh] = remap.try_emplace(f[k], static_cast<int>(remap.size()));
      if (fresh) P.vertices.push_back(pts[f[k]]);
      f[k] = it->second;
    }
  P.faces = std::move(faces);
  return P;
}

SupportField support_of_polytope(const Polytope& P, const SphereMesh& sphere) {
  if (P.vertices.empty()) throw std::invalid_argument("support_of_polytope: empty polytope");
  SupportField h;
  h.sphere = &sphere;
  h.values.resize(sphere.count());
  for (int i = 0; i < sphere.count(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : P.vertices) best = std::max(best, sphere.directions[i].dot(p));
    h.values[i] = best;
  }
  return h;
}

ReconstructedBody reconstruct_body(const SupportField& h) {
  if (!h.sphere) throw std::invalid_argument("reconstruct_body: field needs a sphere mesh");
  const SphereMesh& sphere = *h.sphere;
  const int n = sphere.count();
  ReconstructedBody out;

  Eigen::VectorXd hv = h.values;
  if (hv.minCoeff() <= 1e-9) {
    // Steiner-point estimate: s(K) = 3/(4 pi) int h(nu) nu dsigma
    const Eigen::VectorXd a = sphere.area_weights();
    Vec3 t = Vec3::Zero();
    for (int i = 0; i < n; ++i) t += a[i] * hv[i] * sphere.directions[i];
    t *= 3.0 / (4.0 * M_PI);
    for (int i = 0; i < n; ++i) hv[i] -= sphere.directions[i].dot(t);
    out.recenter = t;
    if (hv.minCoeff() <= 1e-12)
      throw std::runtime_error("reconstruct_body: empty or degenerate halfspace intersection");
  }

  std::vector<Vec3> dual(n);
  for (int i = 0; i < n; ++i) dual[i] = sphere.directions[i] / hv[i];
  auto dual_faces = convex_hull_3d(dual);

  // each dual facet plane <m, q> = o (o > 0) maps to the primal vertex m/o
  std::vector<Vec3> verts;
  verts.reserve(dual_faces.size());
  const double merge_tol = 1e-9;
  for (const auto& f : dual_faces) {
    const Vec3 q0 = dual[f[0]];
    const Vec3 m = (dual[f[1]] - q0).cross(dual[f[2]] - q0);
    const double o = m.dot(q0);
    if (std::abs(o) < 1e-14 * m.norm())
      throw std::runtime_error("reconstruct_body: dual facet through the origin");
    Vec3 v = m / o;
    bool dup = false;
    for (const auto& u : verts)
      if ((u - v).norm() < merge_tol * (1.0 + v.norm())) {
        dup = true;
        break;
      }
    if (!dup) verts.push_back(v);
  }
  if (verts.size() < 4)
    throw std::runtime_error("reconstruct_body: degenerate intersection");
  out.body = polytope_from_points(verts);
  for (auto& v : out.body.vertices) v += out.recenter;  // undo the translation
  return out;
}

double volume(const Polytope& P) {
  Vec3 c = Vec3::Zero();
  for (const auto& v : P.vertices) c += v;
  c /= static_cast<double>(P.vertices.size());
  double vol = 0;
  for (const auto& f : P.faces) {
    const Vec3 a = P.vertices[f[0]] - c, b = P.vertices[f[1]] - c, d = P.vertices[f[2]] - c;
    vol += a.cross(b).dot(d) / 6.0;
  }
  return vol;
}

double surface_area(const Polytope& P) {
  double s = 0;
  for (const auto& f : P.faces) {
    const Vec3 a = P.vertices[f[1]] - P.vertices[f[0]];
    const Vec3 b = P.vertices[f[2]] - P.vertices[f[0]];
    s += 0.5 * a.cross(b).norm();
  }
  return s;
}

WidthStats width_stats(const SupportField& h) {
  if (!h.sphere) throw std::invalid_argument("width_stats: field needs a sphere mesh");
  const SphereMesh& sphere = *h.sphere;
  WidthStats w;
  w.min = std::numeric_limits<double>::infinity();
  w.max = -w.min;
  double sum = 0;
  for (int i = 0; i < sphere.count(); ++i) {
    const double s = h.values[i] + h.values[sphere.antipode[i]];
    w.min = std::min(w.min, s);
    w.max = std::max(w.max, s);
    sum += s;
  }
  w.mean = sum / sphere.count();
  w.relative_error = (w.max - w.min) / w.mean;
  return w;
}

void write_off(const Polytope& P, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "OFF\n" << P.vertices.size() << " " << P.faces.size() << " 0\n";
  for (const auto& v : P.vertices) os << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& f : P.faces) os << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

void write_obj(const Polytope& P, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  for (const auto& v : P.vertices) os << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& f : P.faces)
    os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

Polytope regular_tetrahedron(double edge) {
  const double s = edge / (2.0 * std::sqrt(2.0));
  std::vector<Vec3> v = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  return polytope_from_points(v);
}

Polytope unit_icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& p : v) p.normalize();
  return polytope_from_points(v);
}

}  // namespace cvx
