#include "convexvar/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace cvx {

namespace {

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

}  // namespace

Domain Domain::box(int dim, const Vec3& lo, const Vec3& hi) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Domain::box: dim must be 2 or 3");
  for (int k = 0; k < dim; ++k)
    if (!(lo[k] < hi[k])) throw std::invalid_argument("Domain::box: lo < hi required");
  Domain d;
  d.kind = Kind::Box;
  d.dim = dim;
  d.lo = lo;
  d.hi = hi;
  if (dim == 2) d.lo.z() = d.hi.z() = 0.0;
  return d;
}

Domain Domain::ball(int dim, const Vec3& center, double radius) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Domain::ball: dim must be 2 or 3");
  if (!(radius > 0)) throw std::invalid_argument("Domain::ball: radius > 0 required");
  Domain d;
  d.kind = Kind::Ball;
  d.dim = dim;
  d.center = center;
  if (dim == 2) d.center.z() = 0.0;
  d.radius = radius;
  return d;
}

Domain Domain::polygon(std::vector<Vec3> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("Domain::polygon: need >= 3 vertices");
  const int n = static_cast<int>(vertices.size());
  for (int i = 0; i < n; ++i) {
    const Vec3& a = vertices[i];
    const Vec3& b = vertices[(i + 1) % n];
    const Vec3& c = vertices[(i + 2) % n];
    if (tri_area(a, b, c) <= 0)
      throw std::invalid_argument("Domain::polygon: vertices must be convex, counterclockwise");
  }
  Domain d;
  d.kind = Kind::Polygon;
  d.dim = 2;
  d.poly = std::move(vertices);
  for (auto& p : d.poly) p.z() = 0.0;
  return d;
}

double Domain::diameter() const {
  switch (kind) {
    case Kind::Box: {
      Vec3 e = hi - lo;
      return e.head(dim).norm();
    }
    case Kind::Ball:
      return 2.0 * radius;
    case Kind::Polygon: {
      double best = 0;
      for (size_t i = 0; i < poly.size(); ++i)
        for (size_t j = i + 1; j < poly.size(); ++j)
          best = std::max(best, (poly[i] - poly[j]).norm());
      return best;
    }
  }
  return 0;
}

double Domain::volume() const {
  switch (kind) {
    case Kind::Box: {
      double v = 1;
      for (int k = 0; k < dim; ++k) v *= hi[k] - lo[k];
      return v;
    }
    case Kind::Ball:
      return dim == 2 ? M_PI * radius * radius : 4.0 / 3.0 * M_PI * radius * radius * radius;
    case Kind::Polygon: {
      double a = 0;
      for (size_t i = 1; i + 1 < poly.size(); ++i)
        a += tri_area(poly[0], poly[i], poly[i + 1]);
      return a;
    }
  }
  return 0;
}

bool Domain::contains(const Vec3& p, double tol) const {
  switch (kind) {
    case Kind::Box:
      for (int k = 0; k < dim; ++k)
        if (p[k] < lo[k] - tol || p[k] > hi[k] + tol) return false;
      return true;
    case Kind::Ball:
      return (p - center).head(dim).norm() <= radius + tol;
    case Kind::Polygon: {
      const int n = static_cast<int>(poly.size());
      for (int i = 0; i < n; ++i) {
        const Vec3& a = poly[i];
        const Vec3& b = poly[(i + 1) % n];
        if (tri_area(a, b, p) < -tol * (b - a).norm()) return false;
      }
      return true;
    }
  }
  return false;
}

double SimplicialMesh::simplex_volume(int s) const {
  const auto& sx = simplices[s];
  if (dim == 2) return tri_area(vertices[sx[0]], vertices[sx[1]], vertices[sx[2]]);
  return tet_volume(vertices[sx[0]], vertices[sx[1]], vertices[sx[2]], vertices[sx[3]]);
}

double SimplicialMesh::total_volume() const {
  double v = 0;
  for (int s = 0; s < simplex_count(); ++s) v += simplex_volume(s);
  return v;
}

double SimplicialMesh::domain_diameter() const {
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

void SimplicialMesh::finalize() {
  max_edge_length = 0;
  const int k = verts_per_simplex();
  for (const auto& sx : simplices)
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        max_edge_length = std::max(max_edge_length, (vertices[sx[a]] - vertices[sx[b]]).norm());
  for (int s = 0; s < simplex_count(); ++s)
    if (simplex_volume(s) <= 0) throw std::runtime_error("SimplicialMesh: degenerate simplex");

  if (grid) return;  // lattice meshes use direct lookup

  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  bin_lo_ = lo;
  bin_h_ = std::max(max_edge_length, 1e-12);
  bnx_ = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / bin_h_)));
  bny_ = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / bin_h_)));
  bnz_ = dim == 3 ? std::max(1, static_cast<int>(std::ceil((hi.z() - lo.z()) / bin_h_))) : 1;
  bins_.assign(static_cast<size_t>(bnx_) * bny_ * bnz_, {});
  auto clampi = [](int v, int n) { return std::min(std::max(v, 0), n - 1); };
  for (int s = 0; s < simplex_count(); ++s) {
    Vec3 slo = vertices[simplices[s][0]], shi = slo;
    for (int a = 1; a < verts_per_simplex(); ++a) {
      slo = slo.cwiseMin(vertices[simplices[s][a]]);
      shi = shi.cwiseMax(vertices[simplices[s][a]]);
    }
    int x0 = clampi(static_cast<int>((slo.x() - lo.x()) / bin_h_), bnx_);
    int x1 = clampi(static_cast<int>((shi.x() - lo.x()) / bin_h_), bnx_);
    int y0 = clampi(static_cast<int>((slo.y() - lo.y()) / bin_h_), bny_);
    int y1 = clampi(static_cast<int>((shi.y() - lo.y()) / bin_h_), bny_);
    int z0 = dim == 3 ? clampi(static_cast<int>((slo.z() - lo.z()) / bin_h_), bnz_) : 0;
    int z1 = dim == 3 ? clampi(static_cast<int>((shi.z() - lo.z()) / bin_h_), bnz_) : 0;
    for (int zi = z0; zi <= z1; ++zi)
      for (int yi = y0; yi <= y1; ++yi)
        for (int xi = x0; xi <= x1; ++xi)
          bins_[(static_cast<size_t>(zi) * bny_ + yi) * bnx_ + xi].push_back(s);
  }
}

SimplicialMesh::Location SimplicialMesh::locate_in_candidates(const Vec3& x,
                                                              const std::vector<int>& cand,
                                                              double snap_tol) const {
  Location best;
  double best_def = std::numeric_limits<double>::infinity();
  for (int s : cand) {
    const auto& sx = simplices[s];
    double w[4];
    if (dim == 2) {
      const Vec3 &a = vertices[sx[0]], &b = vertices[sx[1]], &c = vertices[sx[2]];
      double area = tri_area(a, b, c);
      w[0] = tri_area(x, b, c) / area;
      w[1] = tri_area(a, x, c) / area;
      w[2] = tri_area(a, b, x) / area;
      w[3] = 0;
    } else {
      const Vec3 &a = vertices[sx[0]], &b = vertices[sx[1]], &c = vertices[sx[2]],
                 &d = vertices[sx[3]];
      double vol = tet_volume(a, b, c, d);
      w[0] = tet_volume(x, b, c, d) / vol;
      w[1] = tet_volume(a, x, c, d) / vol;
      w[2] = tet_volume(a, b, x, d) / vol;
      w[3] = tet_volume(a, b, c, x) / vol;
    }
    double deficit = 0;
    for (int k = 0; k <= dim; ++k) deficit = std::max(deficit, -w[k]);
    if (deficit < best_def) {
      best_def = deficit;
      best.simplex = s;
      for (int k = 0; k <= dim; ++k) {
        best.idx[k] = sx[k];
        best.w[k] = w[k];
      }
      if (deficit <= 0) break;
    }
  }
  // snap: clamp slightly negative weights and renormalize
  double tol = snap_tol >= 0 ? snap_tol : 1e-6 * domain_diameter();
  if (best.simplex >= 0 && best_def > 0) {
    if (best_def * max_edge_length > tol) return Location{};  // genuinely outside
    double sum = 0;
    for (int k = 0; k <= dim; ++k) {
      best.w[k] = std::max(best.w[k], 0.0);
      sum += best.w[k];
    }
    for (int k = 0; k <= dim; ++k) best.w[k] /= sum;
  }
  return best;
}

SimplicialMesh::Location SimplicialMesh::locate(const Vec3& x, double snap_tol) const {
  if (grid) {
    const auto& g = *grid;
    const double h = g.h;
    auto cell = [&](double u, int n) {
      int c = static_cast<int>(std::floor(u));
      return std::min(std::max(c, 0), n - 1);
    };
    double ux = (x.x() - g.lo.x()) / h, uy = (x.y() - g.lo.y()) / h;
    int ci = cell(ux, g.nx), cj = cell(uy, g.ny);
    double fu = ux - ci, fv = uy - cj;
    Location loc;
    if (dim == 2) {
      // tolerance check against the lattice box
      double tol = (snap_tol >= 0 ? snap_tol : 1e-6 * domain_diameter()) / h;
      if (ux < -tol || uy < -tol || ux > g.nx + tol || uy > g.ny + tol) return Location{};
      fu = std::min(std::max(fu, 0.0), 1.0);
      fv = std::min(std::max(fv, 0.0), 1.0);
      auto vid = [&](int i, int j) { return j * (g.nx + 1) + i; };
      // cells split by the main diagonal (i, j)-(i+1, j+1)
      if (fu >= fv) {
        loc.simplex = 2 * (cj * g.nx + ci);
        loc.idx = {vid(ci, cj), vid(ci + 1, cj), vid(ci + 1, cj + 1), -1};
        loc.w = {1.0 - fu, fu - fv, fv, 0.0};
      } else {
        loc.simplex = 2 * (cj * g.nx + ci) + 1;
        loc.idx = {vid(ci, cj), vid(ci + 1, cj + 1), vid(ci, cj + 1), -1};
        loc.w = {1.0 - fv, fu, fv - fu, 0.0};
      }
      return loc;
    }
    double uz = (x.z() - g.lo.z()) / h;
    int ck = cell(uz, g.nz);
    double fw = uz - ck;
    double tol = (snap_tol >= 0 ? snap_tol : 1e-6 * domain_diameter()) / h;
    if (ux < -tol || uy < -tol || uz < -tol || ux > g.nx + tol || uy > g.ny + tol ||
        uz > g.nz + tol)
      return Location{};
    fu = std::min(std::max(fu, 0.0), 1.0);
    fv = std::min(std::max(fv, 0.0), 1.0);
    fw = std::min(std::max(fw, 0.0), 1.0);
    auto vid = [&](int i, int j, int k) { return (k * (g.ny + 1) + j) * (g.nx + 1) + i; };
    // Kuhn simplex: sort local coordinates, path from (0,0,0) to (1,1,1)
    double f[3] = {fu, fv, fw};
    int ord[3] = {0, 1, 2};
    std::sort(ord, ord + 3, [&](int a, int b) { return f[a] > f[b]; });
    int ijk[3] = {ci, cj, ck};
    int corner[4][3];
    for (int a = 0; a < 3; ++a) corner[0][a] = 0;
    for (int step = 0; step < 3; ++step) {
      for (int a = 0; a < 3; ++a) corner[step + 1][a] = corner[step][a];
      corner[step + 1][ord[step]] = 1;
    }
    loc.simplex = -1;  // resolved below against the stored permutation order
    for (int v = 0; v < 4; ++v)
      loc.idx[v] = vid(ijk[0] + corner[v][0], ijk[1] + corner[v][1], ijk[2] + corner[v][2]);
    loc.w[0] = 1.0 - f[ord[0]];
    loc.w[1] = f[ord[0]] - f[ord[1]];
    loc.w[2] = f[ord[1]] - f[ord[2]];
    loc.w[3] = f[ord[2]];
    // map the permutation to the simplex id: perms enumerated in lex order
    static const int perm_rank[3][3] = {{-1, 0, 1}, {2, -1, 3}, {4, 5, -1}};
    int rank = perm_rank[ord[0]][ord[1]];
    loc.simplex = 6 * ((ck * g.ny + cj) * g.nx + ci) + rank;
    return loc;
  }

  auto clampi = [](int v, int n) { return std::min(std::max(v, 0), n - 1); };
  int xi = clampi(static_cast<int>((x.x() - bin_lo_.x()) / bin_h_), bnx_);
  int yi = clampi(static_cast<int>((x.y() - bin_lo_.y()) / bin_h_), bny_);
  int zi = dim == 3 ? clampi(static_cast<int>((x.z() - bin_lo_.z()) / bin_h_), bnz_) : 0;
  // search the point's bin, then widen once
  for (int ring = 0; ring < 2; ++ring) {
    std::vector<int> cand;
    for (int dz = -ring; dz <= ring; ++dz)
      for (int dy = -ring; dy <= ring; ++dy)
        for (int dx = -ring; dx <= ring; ++dx) {
          if (ring == 1 && std::abs(dx) != 1 && std::abs(dy) != 1 && std::abs(dz) != 1) continue;
          int cx = xi + dx, cy = yi + dy, cz = zi + dz;
          if (cx < 0 || cx >= bnx_ || cy < 0 || cy >= bny_ || cz < 0 || cz >= bnz_) continue;
          const auto& b = bins_[(static_cast<size_t>(cz) * bny_ + cy) * bnx_ + cx];
          cand.insert(cand.end(), b.begin(), b.end());
        }
    if (cand.empty()) continue;
    Location loc = locate_in_candidates(x, cand, snap_tol);
    if (loc.simplex >= 0) return loc;
  }
  return Location{};
}

SimplicialMesh build_grid_mesh(const Domain& domain, int cells_per_axis) {
  if (domain.kind != Domain::Kind::Box)
    throw std::invalid_argument("build_grid_mesh: box domain required");
  if (cells_per_axis < 1) throw std::invalid_argument("build_grid_mesh: cells_per_axis >= 1");
  const int n = cells_per_axis;
  const int d = domain.dim;
  const double hx = (domain.hi.x() - domain.lo.x()) / n;
  const double hy = (domain.hi.y() - domain.lo.y()) / n;
  if (std::abs(hx - hy) > 1e-12 * std::abs(hx))
    throw std::invalid_argument("build_grid_mesh: box must have equal extents per axis");
  if (d == 3) {
    const double hz = (domain.hi.z() - domain.lo.z()) / n;
    if (std::abs(hx - hz) > 1e-12 * std::abs(hx))
      throw std::invalid_argument("build_grid_mesh: box must have equal extents per axis");
  }

  SimplicialMesh m;
  m.dim = d;
  SimplicialMesh::RegularGrid g;
  g.lo = domain.lo;
  g.h = hx;
  g.nx = g.ny = n;
  g.nz = d == 3 ? n : 0;

  if (d == 2) {
    m.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        m.vertices.emplace_back(domain.lo.x() + i * hx, domain.lo.y() + j * hx, 0.0);
    auto vid = [&](int i, int j) { return j * (n + 1) + i; };
    // cells split by the main diagonal (i, j)-(i+1, j+1), fixed orientation
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        m.simplices.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), -1});
        m.simplices.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1), -1});
      }
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        if (i == 0 || i == n || j == 0 || j == n) m.boundary_vertices.push_back(vid(i, j));
  } else {
    m.vertices.reserve(static_cast<size_t>(n + 1) * (n + 1) * (n + 1));
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
          m.vertices.emplace_back(domain.lo.x() + i * hx, domain.lo.y() + j * hx,
                                  domain.lo.z() + k * hx);
    auto vid = [&](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
    // Kuhn subdivision: one tet per permutation, lexicographic order.
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (const auto& p : perms) {
            int c[4][3] = {{0, 0, 0}};
            for (int step = 0; step < 3; ++step) {
              for (int a = 0; a < 3; ++a) c[step + 1][a] = c[step][a];
              c[step + 1][p[step]] = 1;
            }
            std::array<int, 4> tet;
            for (int v = 0; v < 4; ++v)
              tet[v] = vid(i + c[v][0], j + c[v][1], k + c[v][2]);
            // orient positively
            if (tet_volume(m.vertices[tet[0]], m.vertices[tet[1]], m.vertices[tet[2]],
                           m.vertices[tet[3]]) < 0)
              std::swap(tet[2], tet[3]);
            m.simplices.push_back(tet);
          }
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
          if (i == 0 || i == n || j == 0 || j == n || k == 0 || k == n)
            m.boundary_vertices.push_back(vid(i, j, k));
  }
  m.grid = g;
  m.finalize();
  return m;
}

SimplicialMesh build_disk_mesh(const Domain& domain, double target_delta) {
  if (domain.kind != Domain::Kind::Ball || domain.dim != 2)
    throw std::invalid_argument("build_disk_mesh: 2D ball domain required");
  if (!(target_delta > 0)) throw std::invalid_argument("build_disk_mesh: delta > 0");
  if (target_delta > domain.radius)
    throw std::invalid_argument("build_disk_mesh: delta larger than radius");
  const double r = domain.radius;
  const int rings = std::max(1, static_cast<int>(std::ceil(r / target_delta)));
  const double dr = r / rings;

  SimplicialMesh m;
  m.dim = 2;
  std::vector<std::vector<int>> ring_ids(rings + 1);
  m.vertices.push_back(domain.center);
  ring_ids[0] = {0};
  for (int k = 1; k <= rings; ++k) {
    const double rk = dr * k;
    int cnt = std::max(6, static_cast<int>(std::ceil(2.0 * M_PI * rk / target_delta)));
    for (int a = 0; a < cnt; ++a) {
      double th = 2.0 * M_PI * a / cnt;
      ring_ids[k].push_back(static_cast<int>(m.vertices.size()));
      m.vertices.emplace_back(domain.center.x() + rk * std::cos(th),
                              domain.center.y() + rk * std::sin(th), 0.0);
    }
  }
  // stitch consecutive rings by merging the two angular sequences
  for (int k = 1; k <= rings; ++k) {
    const auto& inner = ring_ids[k - 1];
    const auto& outer = ring_ids[k];
    const int ni = static_cast<int>(inner.size());
    const int no = static_cast<int>(outer.size());
    if (ni == 1) {
      for (int a = 0; a < no; ++a)
        m.simplices.push_back({inner[0], outer[a], outer[(a + 1) % no], -1});
      continue;
    }
    int ia = 0, oa = 0;
    auto iang = [&](int a) { return 2.0 * M_PI * a / ni; };
    auto oang = [&](int a) { return 2.0 * M_PI * a / no; };
    while (ia < ni || oa < no) {
      bool advance_outer;
      if (oa >= no)
        advance_outer = false;
      else if (ia >= ni)
        advance_outer = true;
      else
        advance_outer = oang(oa + 1) <= iang(ia + 1);
      if (advance_outer) {
        m.simplices.push_back({inner[ia % ni], outer[oa % no], outer[(oa + 1) % no], -1});
        ++oa;
      } else {
        m.simplices.push_back({inner[ia % ni], outer[oa % no], inner[(ia + 1) % ni], -1});
        ++ia;
      }
    }
  }
  m.boundary_vertices = ring_ids[rings];
  m.finalize();
  return m;
}

namespace {

void append_spaced(std::vector<Vec3>& out, const Vec3& a, const Vec3& b, double eps,
                   bool include_ends) {
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / eps)));
  for (int i = include_ends ? 0 : 1; i <= (include_ends ? n : n - 1); ++i)
    out.push_back(a + (b - a) * (static_cast<double>(i) / n));
}

void dedup_points(std::vector<Vec3>& pts, double tol) {
  std::vector<Vec3> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : out)
      if ((p - q).norm() < tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(p);
  }
  pts.swap(out);
}

}  // namespace

std::vector<Vec3> sample_boundary(const Domain& domain, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("sample_boundary: eps > 0");
  std::vector<Vec3> pts;
  switch (domain.kind) {
    case Domain::Kind::Box: {
      if (domain.dim == 2) {
        Vec3 c[4] = {Vec3(domain.lo.x(), domain.lo.y(), 0), Vec3(domain.hi.x(), domain.lo.y(), 0),
                     Vec3(domain.hi.x(), domain.hi.y(), 0), Vec3(domain.lo.x(), domain.hi.y(), 0)};
        for (int e = 0; e < 4; ++e) {
          pts.push_back(c[e]);
          append_spaced(pts, c[e], c[(e + 1) % 4], eps, false);
        }
      } else {
        // per-face lattices with spacing <= eps; shared edges deduplicated
        for (int axis = 0; axis < 3; ++axis)
          for (int side = 0; side < 2; ++side) {
            int u = (axis + 1) % 3, v = (axis + 2) % 3;
            double lu = domain.hi[u] - domain.lo[u], lv = domain.hi[v] - domain.lo[v];
            int nu = std::max(1, static_cast<int>(std::ceil(lu / eps)));
            int nv = std::max(1, static_cast<int>(std::ceil(lv / eps)));
            for (int i = 0; i <= nu; ++i)
              for (int j = 0; j <= nv; ++j) {
                Vec3 p;
                p[axis] = side ? domain.hi[axis] : domain.lo[axis];
                p[u] = domain.lo[u] + lu * i / nu;
                p[v] = domain.lo[v] + lv * j / nv;
                pts.push_back(p);
              }
          }
        dedup_points(pts, 1e-12 * domain.diameter());
      }
      break;
    }
    case Domain::Kind::Ball: {
      if (domain.dim == 2) {
        int n = std::max(4, static_cast<int>(std::ceil(2.0 * M_PI * domain.radius / eps)));
        for (int a = 0; a < n; ++a) {
          double th = 2.0 * M_PI * a / n;
          pts.emplace_back(domain.center.x() + domain.radius * std::cos(th),
                           domain.center.y() + domain.radius * std::sin(th), 0.0);
        }
      } else {
        // Fibonacci sphere, count chosen so nearest-sample distance <= eps
        double rel = eps / domain.radius;
        int n = std::max(16, static_cast<int>(std::ceil(16.0 / (rel * rel))));
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int a = 0; a < n; ++a) {
          double z = 1.0 - 2.0 * (a + 0.5) / n;
          double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
          double th = ga * a;
          pts.push_back(domain.center +
                        domain.radius * Vec3(rr * std::cos(th), rr * std::sin(th), z));
        }
      }
      break;
    }
    case Domain::Kind::Polygon: {
      const int n = static_cast<int>(domain.poly.size());
      for (int e = 0; e < n; ++e) {
        pts.push_back(domain.poly[e]);
        append_spaced(pts, domain.poly[e], domain.poly[(e + 1) % n], eps, false);
      }
      break;
    }
  }
  return pts;
}

std::vector<Vec3> subsample_mesh_boundary(const SimplicialMesh& mesh, double eps) {
  // order boundary vertices by angle around their centroid (convex domains)
  std::vector<int> bnd = mesh.boundary_vertices;
  Vec3 c = Vec3::Zero();
  for (int v : bnd) c += mesh.vertices[v];
  c /= static_cast<double>(bnd.size());
  std::sort(bnd.begin(), bnd.end(), [&](int a, int b) {
    const Vec3 pa = mesh.vertices[a] - c, pb = mesh.vertices[b] - c;
    return std::atan2(pa.y(), pa.x()) < std::atan2(pb.y(), pb.x());
  });
  const int nb = static_cast<int>(bnd.size());
  std::vector<double> arc(nb + 1, 0.0);
  for (int i = 0; i < nb; ++i)
    arc[i + 1] = arc[i] + (mesh.vertices[bnd[(i + 1) % nb]] - mesh.vertices[bnd[i]]).norm();
  const double total = arc[nb];
  const int n = std::max(4, static_cast<int>(std::ceil(total / eps)));
  // nearest boundary vertex to each equally spaced arc target
  std::vector<Vec3> out;
  int i = 0, last_pick = -1;
  for (int k = 0; k < n; ++k) {
    const double t = total * k / n;
    while (i + 1 < nb && std::abs(arc[i + 1] - t) <= std::abs(arc[i] - t)) ++i;
    if (i != last_pick) {
      out.push_back(mesh.vertices[bnd[i]]);
      last_pick = i;
    }
  }
  return out;
}

EvalRow interpolation_row(const SimplicialMesh& mesh, const Vec3& x) {
  auto loc = mesh.locate(x);
  if (loc.simplex < 0)
    throw std::domain_error("interpolation_row: point outside the meshed domain");
  EvalRow row;
  for (int k = 0; k <= mesh.dim; ++k) {
    row.idx.push_back(loc.idx[k]);
    row.w.push_back(loc.w[k]);
  }
  // keep indices sorted
  for (size_t a = 0; a < row.idx.size(); ++a)
    for (size_t b = a + 1; b < row.idx.size(); ++b)
      if (row.idx[b] < row.idx[a]) {
        std::swap(row.idx[a], row.idx[b]);
        std::swap(row.w[a], row.w[b]);
      }
  return row;
}

NodalField interpolate(const std::function<double(const Vec3&)>& f, const SimplicialMesh& mesh) {
  NodalField out;
  out.mesh = &mesh;
  out.values.resize(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    double v = f(mesh.vertices[i]);
    if (!std::isfinite(v)) throw std::invalid_argument("interpolate: non-finite sample");
    out.values[i] = v;
  }
  return out;
}

void write_off(const SimplicialMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "OFF\n" << mesh.vertex_count() << " " << mesh.simplex_count() << " 0\n";
  for (const auto& v : mesh.vertices) os << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& s : mesh.simplices) {
    if (mesh.dim == 2)
      os << "3 " << s[0] << " " << s[1] << " " << s[2] << "\n";
    else
      os << "4 " << s[0] << " " << s[1] << " " << s[2] << " " << s[3] << "\n";
  }
}

void write_mesh_text(const SimplicialMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  os << "# convexvar mesh: dim nv ns, then vertices, then simplices\n";
  os << mesh.dim << " " << mesh.vertex_count() << " " << mesh.simplex_count() << "\n";
  for (const auto& v : mesh.vertices) {
    os << v.x() << " " << v.y();
    if (mesh.dim == 3) os << " " << v.z();
    os << "\n";
  }
  for (const auto& s : mesh.simplices) {
    for (int k = 0; k <= mesh.dim; ++k) os << s[k] << (k == mesh.dim ? '\n' : ' ');
  }
}

void write_field_text(const NodalField& field, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  os << "# convexvar field: one nodal value per line\n";
  for (Eigen::Index i = 0; i < field.values.size(); ++i) os << field.values[i] << "\n";
}

}  // namespace cvx
