#include "convexvar/mesh.hpp"

#include "doctest.h"

#include <cmath>

using namespace cvx;

TEST_SUITE_BEGIN("mesh");

TEST_CASE("grid mesh: single cell split") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh m = build_grid_mesh(d, 1);
  CHECK(m.vertex_count() == 4);
  CHECK(m.simplex_count() == 2);
  CHECK(m.max_edge_length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("grid mesh: lattice counts") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  CHECK(build_grid_mesh(d, 30).vertex_count() == 961);

  Domain d3 = Domain::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  SimplicialMesh m3 = build_grid_mesh(d3, 2);
  CHECK(m3.vertex_count() == 27);
  CHECK(m3.simplex_count() == 48);
}

TEST_CASE("grid mesh: volume conservation") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh m = build_grid_mesh(d, 7);
  CHECK(m.total_volume() == doctest::Approx(1.0).epsilon(1e-9));

  Domain d3 = Domain::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  SimplicialMesh m3 = build_grid_mesh(d3, 3);
  CHECK(m3.total_volume() == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("disk mesh: containment, edge bound, area") {
  Domain d = Domain::ball(2, Vec3(0, 0, 0), 1.0);
  SimplicialMesh coarse = build_disk_mesh(d, 1.0);
  for (const auto& v : coarse.vertices) CHECK(v.norm() <= 1.0 + 1e-12);

  SimplicialMesh fine = build_disk_mesh(d, 1.0 / 60);
  CHECK(fine.max_edge_length <= 0.025);
  for (int b : fine.boundary_vertices)
    CHECK(fine.vertices[b].norm() == doctest::Approx(1.0).epsilon(1e-12));

  SimplicialMesh mid = build_disk_mesh(d, 0.1);
  CHECK(mid.max_edge_length <= 1.5 * 0.1);
  CHECK(std::abs(mid.total_volume() - M_PI) / M_PI < 0.02);
  CHECK(std::abs(fine.total_volume() - M_PI) / M_PI < 0.02);

  CHECK_THROWS(build_disk_mesh(d, 1.5));
}

namespace {

double covering_radius(const Domain& d, const std::vector<Vec3>& pts, double probe_step) {
  // dense boundary probing
  double worst = 0;
  auto check_point = [&](const Vec3& p) {
    double best = 1e300;
    for (const auto& q : pts) best = std::min(best, (p - q).norm());
    worst = std::max(worst, best);
  };
  if (d.kind == Domain::Kind::Box && d.dim == 2) {
    Vec3 c[4] = {Vec3(d.lo.x(), d.lo.y(), 0), Vec3(d.hi.x(), d.lo.y(), 0),
                 Vec3(d.hi.x(), d.hi.y(), 0), Vec3(d.lo.x(), d.hi.y(), 0)};
    for (int e = 0; e < 4; ++e) {
      const Vec3 a = c[e], b = c[(e + 1) % 4];
      const int n = static_cast<int>(std::ceil((b - a).norm() / probe_step));
      for (int i = 0; i <= n; ++i) check_point(a + (b - a) * (double(i) / n));
    }
  } else if (d.kind == Domain::Kind::Ball && d.dim == 2) {
    const int n = static_cast<int>(std::ceil(2 * M_PI * d.radius / probe_step));
    for (int i = 0; i < n; ++i) {
      const double th = 2 * M_PI * i / n;
      check_point(d.center + d.radius * Vec3(std::cos(th), std::sin(th), 0));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("boundary sampling: covering property") {
  Domain sq = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  auto pts = sample_boundary(sq, 0.5);
  CHECK(pts.size() == 8);  // corners + edge midpoints
  CHECK(covering_radius(sq, pts, 0.05) <= 0.5);

  Domain circ = Domain::ball(2, Vec3(0, 0, 0), 1.0);
  auto cpts = sample_boundary(circ, 0.1);
  CHECK(covering_radius(circ, cpts, 0.01) <= 0.1);

  // corners always present, even for huge eps
  auto few = sample_boundary(sq, 2.0 * sq.diameter());
  REQUIRE(few.size() >= 4);
  for (const Vec3 c : {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}) {
    double best = 1e300;
    for (const auto& p : few) best = std::min(best, (p - c).norm());
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("boundary sampling: 3D box covering spot check") {
  Domain box = Domain::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  auto pts = sample_boundary(box, 0.5);
  // probe random surface points
  uint64_t s = 9;
  auto rnd = [&]() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(s >> 11) * 0x1.0p-53;
  };
  for (int t = 0; t < 500; ++t) {
    Vec3 p(2 * rnd() - 1, 2 * rnd() - 1, 2 * rnd() - 1);
    int axis = int(rnd() * 3) % 3;
    p[axis] = rnd() < 0.5 ? -1.0 : 1.0;
    double best = 1e300;
    for (const auto& q : pts) best = std::min(best, (p - q).norm());
    CHECK(best <= 0.5 + 1e-12);
  }
}

TEST_CASE("interpolation row: barycentric weights") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh m = build_grid_mesh(d, 4);

  EvalRow at_vertex = interpolation_row(m, m.vertices[7]);
  double wmax = 0;
  for (size_t k = 0; k < at_vertex.idx.size(); ++k) {
    if (at_vertex.idx[k] == 7) wmax = at_vertex.w[k];
    CHECK(at_vertex.w[k] >= -1e-12);
  }
  CHECK(wmax == doctest::Approx(1.0).epsilon(1e-12));

  // edge midpoint between lattice neighbors 0 and 1
  EvalRow mid = interpolation_row(m, 0.5 * (m.vertices[0] + m.vertices[1]));
  double w0 = 0, w1 = 0;
  for (size_t k = 0; k < mid.idx.size(); ++k) {
    if (mid.idx[k] == 0) w0 = mid.w[k];
    if (mid.idx[k] == 1) w1 = mid.w[k];
  }
  CHECK(w0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w1 == doctest::Approx(0.5).epsilon(1e-12));

  // centroid of the first triangle
  const auto& sx = m.simplices[0];
  Vec3 c = (m.vertices[sx[0]] + m.vertices[sx[1]] + m.vertices[sx[2]]) / 3.0;
  EvalRow cen = interpolation_row(m, c);
  for (double w : cen.w) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-9));

  CHECK_THROWS_AS(interpolation_row(m, Vec3(2.0, 2.0, 0)), std::domain_error);
}

TEST_CASE("interpolation row: weights reproduce the point") {
  Domain d3 = Domain::box(3, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  SimplicialMesh m = build_grid_mesh(d3, 3);
  uint64_t s = 17;
  auto rnd = [&]() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return 2.0 * double(s >> 11) * 0x1.0p-53 - 1.0;
  };
  for (int t = 0; t < 200; ++t) {
    Vec3 p(rnd(), rnd(), rnd());
    EvalRow row = interpolation_row(m, p);
    Vec3 rec = Vec3::Zero();
    double wsum = 0;
    for (size_t k = 0; k < row.idx.size(); ++k) {
      rec += row.w[k] * m.vertices[row.idx[k]];
      wsum += row.w[k];
      CHECK(row.w[k] >= -1e-12);
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((rec - p).norm() <= 1e-12);
  }
}

TEST_CASE("interpolate: exactness and approximation bounds") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh m = build_grid_mesh(d, 16);
  const double delta = m.max_edge_length;

  NodalField aff = interpolate([](const Vec3& p) { return 0.3 * p.x() - 1.1 * p.y() + 2; }, m);
  NodalField quad = interpolate([](const Vec3& p) { return (p - Vec3(0.3, 0.4, 0)).squaredNorm(); }, m);
  NodalField lip1 = interpolate([](const Vec3& p) { return (p - Vec3(0.5, 0.5, 0)).norm(); }, m);

  uint64_t s = 3;
  auto rnd = [&]() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(s >> 11) * 0x1.0p-53;
  };
  double worst_quad = 0, worst_lip = 0;
  for (int t = 0; t < 1000; ++t) {
    Vec3 p(rnd(), rnd(), 0);
    auto loc = m.locate(p);
    CHECK(aff(loc) == doctest::Approx(0.3 * p.x() - 1.1 * p.y() + 2).epsilon(1e-12));
    worst_quad = std::max(worst_quad, std::abs(quad(loc) - (p - Vec3(0.3, 0.4, 0)).squaredNorm()));
    worst_lip = std::max(worst_lip, std::abs(lip1(loc) - (p - Vec3(0.5, 0.5, 0)).norm()));
  }
  CHECK(worst_quad <= delta * delta);  // L3 with Lip(grad) = 2
  CHECK(worst_lip <= delta);           // L2 with Lip = 1

  CHECK_THROWS(interpolate([](const Vec3&) { return std::nan(""); }, m));
}

TEST_CASE("mesh serialization") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh m = build_grid_mesh(d, 2);
  write_off(m, "test_mesh.off");
  write_mesh_text(m, "test_mesh.txt");
  NodalField f = interpolate([](const Vec3& p) { return p.x(); }, m);
  write_field_text(f, "test_field.txt");
  std::ifstream off("test_mesh.off");
  std::string header;
  off >> header;
  CHECK(header == "OFF");
}

TEST_SUITE_END();
