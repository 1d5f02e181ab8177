#include "convexvar/sphere.hpp"

#include "doctest.h"

#include <cmath>

using namespace cvx;

TEST_SUITE_BEGIN("sphere");

TEST_CASE("icosphere: counts and antipodal closure") {
  SphereMesh s0 = build_sphere_mesh(0);
  CHECK(s0.count() == 12);
  SphereMesh s4 = build_sphere_mesh(4);
  CHECK(s4.count() == 2562);  // 10*4^4 + 2

  for (const SphereMesh* s : {&s0, &s4}) {
    for (int i = 0; i < s->count(); ++i) {
      CHECK(std::abs(s->directions[i].norm() - 1.0) <= 1e-12);
      const int a = s->antipode[i];
      REQUIRE(a >= 0);
      CHECK(a != i);
      CHECK(s->antipode[a] == i);
      CHECK((s->directions[a] + s->directions[i]).norm() <= 1e-9);
    }
  }
}

TEST_CASE("great circles: quarter-turn example") {
  auto circles = sample_great_circles(1, M_PI / 2, 0);
  REQUIRE(circles.size() == 1);
  const auto& c = circles.front();
  CHECK((c.normal - Vec3(0, 0, 1)).norm() <= 1e-12);
  REQUIRE(c.points.size() == 4);
  // the four equatorial points +-e1, +-e2 in some order
  for (const Vec3 target : {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0)}) {
    double best = 1e300;
    for (const auto& p : c.points) best = std::min(best, (p - target).norm());
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("great circles: step rounding and invariants") {
  auto circles = sample_great_circles(10, 0.02, 42);
  for (const auto& c : circles) {
    CHECK(static_cast<int>(c.points.size()) == 314);  // round(2 pi / 0.02)
    CHECK(c.weight == doctest::Approx(std::cos(2 * M_PI / 314)).epsilon(1e-15));
    const int n = static_cast<int>(c.points.size());
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(c.points[i].dot(c.normal)) <= 1e-12);
      CHECK(std::abs(c.points[i].norm() - 1.0) <= 1e-12);
      const Vec3& q = c.points[(i + 1) % n];  // cyclic wrap
      const double ang = std::acos(std::clamp(c.points[i].dot(q), -1.0, 1.0));
      CHECK(std::abs(ang - c.eps) <= 1e-9);
      // eps/2 sparsity against the next few points
      for (int k = 2; k <= 3; ++k)
        CHECK((c.points[i] - c.points[(i + k) % n]).norm() >= c.eps / 2);
    }
  }
}

TEST_CASE("spherical interpolation: partition of unity and locality") {
  SphereMesh s = build_sphere_mesh(2);
  // at a mesh direction: single weight 1
  EvalRow at = s.interpolation_row(s.directions[5]);
  double w5 = 0, wsum = 0;
  for (size_t k = 0; k < at.idx.size(); ++k) {
    wsum += at.w[k];
    if (at.idx[k] == 5) w5 = at.w[k];
  }
  CHECK(w5 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

  uint64_t st = 77;
  auto rnd = [&]() {
    st = st * 6364136223846793005ULL + 1442695040888963407ULL;
    return 2.0 * double(st >> 11) * 0x1.0p-53 - 1.0;
  };
  const Vec3 a(0.3, -1.2, 0.7);
  double worst_lin = 0;
  for (int t = 0; t < 500; ++t) {
    Vec3 u(rnd(), rnd(), rnd());
    if (u.norm() < 1e-3) continue;
    u.normalize();
    EvalRow row = s.interpolation_row(u);
    double sum = 0, val = 0;
    for (size_t k = 0; k < row.idx.size(); ++k) {
      CHECK(row.w[k] >= -1e-12);
      sum += row.w[k];
      val += row.w[k] * s.directions[row.idx[k]].dot(a);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    worst_lin = std::max(worst_lin, std::abs(val - u.dot(a)));
  }
  // restrictions of linear forms are reproduced up to O(mesh size^2)
  CHECK(worst_lin <= 0.05 * a.norm());
}

TEST_CASE("area weights sum to the sphere area") {
  SphereMesh s = build_sphere_mesh(3);
  CHECK(s.area_weights().sum() == doctest::Approx(4 * M_PI).epsilon(1e-9));
}

TEST_CASE("sphere csv export") {
  SphereMesh s = build_sphere_mesh(0);
  write_sphere_csv(s, "test_sphere.csv");
  std::ifstream is("test_sphere.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "x,y,z,antipode");
}

TEST_SUITE_END();
