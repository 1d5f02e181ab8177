#include "convexvar/constraints.hpp"

#include "doctest.h"

#include <cmath>

using namespace cvx;

TEST_SUITE_BEGIN("constraints");

TEST_CASE("discrete segment examples") {
  auto pts = discrete_segment(Vec3(0, 0, 0), Vec3(1, 0, 0), 0.3);
  REQUIRE(pts.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK((pts[i] - Vec3(0.3 * i, 0, 0)).norm() <= 1e-12);

  auto two = discrete_segment(Vec3(0, 0, 0), Vec3(1, 1, 0), std::sqrt(2.0));
  REQUIRE(two.size() == 2);
  CHECK((two[1] - Vec3(1, 1, 0)).norm() <= 1e-12);

  auto one = discrete_segment(Vec3(0, 0, 0), Vec3(1, 0, 0), 1.5);
  CHECK(one.size() == 1);
}

TEST_CASE("ell_xyz: affine kernel, curvature, kink") {
  const Vec3 x(0, 0, 0), y(1, 1, 0), z(0.5, 0.5, 0);
  // affine g
  auto g = [](const Vec3& p) { return 2.0 * p.x() - 0.7 * p.y() + 0.3; };
  CHECK(ell_xyz(g(x), g(y), g(z), x, y, z) == doctest::Approx(0.0).epsilon(1e-12));

  // t^2 on equispaced collinear points with gap eps
  const double eps = 0.37;
  const Vec3 dir = Vec3(1, 2, 0).normalized();
  const Vec3 zz = Vec3(0.1, 0.2, 0), xx = zz - eps * dir, yy = zz + eps * dir;
  auto q = [&](const Vec3& p) { return p.squaredNorm(); };
  CHECK(ell_xyz(q(xx), q(yy), q(zz), xx, yy, zz) == doctest::Approx(-eps * eps).epsilon(1e-10));

  // max(0, x1 + x2 - 1)
  auto h = [](const Vec3& p) { return std::max(0.0, p.x() + p.y() - 1.0); };
  CHECK(ell_xyz(h(x), h(y), h(z), x, y, z) == doctest::Approx(-0.5).epsilon(1e-12));

  CHECK_THROWS(ell_xyz(0, 0, 0, x, y, Vec3(0.5, 0.6, 0)));
}

TEST_CASE("convexity blocks: pair combinatorics on the unit square") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 4);
  std::vector<Vec3> corners = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  auto blocks = build_convexity_blocks(mesh, corners, 0.5);
  CHECK(blocks.size() == 6);  // all pairs keep >= 3 points at eps = 0.5
  for (const auto& blk : blocks) {
    CHECK(blk.cone.kind == ConeKind::UniformConvex1D);
    CHECK(blk.op.nrows() >= 3);
  }
  // diagonals: length sqrt(2), i <= 2.83 -> 3 samples
  int diag_blocks = 0;
  for (const auto& blk : blocks)
    if (blk.op.nrows() == 3) ++diag_blocks;
  CHECK(diag_blocks == 6);

  // |U| = m -> m(m-1)/2 candidate pairs before the filter: with tiny eps all
  // pairs survive
  std::vector<Vec3> five = corners;
  five.push_back(Vec3(0.5, 0, 0));
  auto blocks5 = build_convexity_blocks(mesh, five, 0.05);
  CHECK(blocks5.size() == 10);
}

TEST_CASE("convexity blocks: rows reproduce the segment points") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 8);
  auto U = sample_boundary(d, 0.4);
  auto blocks = build_convexity_blocks(mesh, U, 0.31);
  Eigen::VectorXd coord_x(mesh.vertex_count()), coord_y(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    coord_x[i] = mesh.vertices[i].x();
    coord_y[i] = mesh.vertices[i].y();
  }
  for (const auto& blk : blocks) {
    REQUIRE(blk.op.kind == BlockOp::Kind::Segment);
    for (int r = 0; r < blk.op.nrows(); ++r) {
      const EvalRow row = blk.op.materialize_row(r);
      const Vec3 expected = blk.op.origin + blk.op.step * r * blk.op.dir;
      CHECK(row.apply(coord_x) == doctest::Approx(expected.x()).epsilon(1e-10));
      CHECK(row.apply(coord_y) == doctest::Approx(expected.y()).epsilon(1e-10));
    }
  }
}

TEST_CASE("feasibility: affine fields are exactly neutral") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 6);
  auto blocks = build_convexity_blocks(mesh, sample_boundary(d, 0.3), 0.3);
  Eigen::VectorXd aff =
      interpolate([](const Vec3& p) { return 1.7 * p.x() - 0.2 * p.y() + 5.0; }, mesh).values;
  auto rep = verify_feasibility(aff, blocks);
  CHECK(rep.global_max <= 1e-12);
  CHECK(std::abs(rep.max_signed) <= 1e-12);
}

TEST_CASE("feasibility: kink interpolant violates at eps << delta") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 10);
  const double delta = 0.1;  // grid spacing
  auto blocks = build_convexity_blocks(mesh, sample_boundary(d, delta / 4), delta / 4);
  Eigen::VectorXd f =
      interpolate([](const Vec3& p) { return std::max(0.0, p.x() + p.y() - 1.0); }, mesh).values;
  auto rep = verify_feasibility(f, blocks);
  CHECK(rep.global_max > 1e-4);  // strictly positive violations off-lattice
}

TEST_CASE("spherical blocks: constant and linear fields") {
  SphereMesh sphere = build_sphere_mesh(2);
  auto circles = sample_great_circles(20, 0.15, 3);
  auto blocks = build_spherical_blocks(sphere, circles);
  const double w = circles.front().weight;

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(sphere.count());
  Eigen::VectorXd vals;
  double worst_dev = 0;
  for (const auto& blk : blocks) {
    const int n = blk.op.nrows();
    vals.resize(n);
    blk.op.apply(ones, vals);
    for (int i = 0; i < n; ++i) {
      const double ell = w * vals[i] - 0.5 * (vals[(i + n - 1) % n] + vals[(i + 1) % n]);
      worst_dev = std::max(worst_dev, std::abs(ell - (w - 1.0)));
    }
  }
  CHECK(worst_dev <= 1e-12);

  // support function of a point {a}: the restriction of a linear form is
  // reproduced to the interpolation accuracy of the mesh
  const Vec3 a(0.2, -0.5, 0.8);
  Eigen::VectorXd lin(sphere.count());
  for (int i = 0; i < sphere.count(); ++i) lin[i] = sphere.directions[i].dot(a);
  auto rep = verify_feasibility(lin, blocks);
  CHECK(rep.global_max <= 2e-3 * a.norm());
}

TEST_CASE("width block: pair sums") {
  SphereMesh sphere = build_sphere_mesh(1);
  ConstraintBlock blk = build_width_block(sphere, 2.0);
  Eigen::VectorXd h = Eigen::VectorXd::Constant(sphere.count(), 1.0);  // ball radius 1
  std::vector<ConstraintBlock> blocks{blk};
  CHECK(verify_feasibility(h, blocks).global_max <= 1e-12);

  // support of the cube [-1,1]^3 violates any constant-width constraint
  Eigen::VectorXd hcube(sphere.count());
  for (int i = 0; i < sphere.count(); ++i)
    hcube[i] = sphere.directions[i].cwiseAbs().sum();
  ConstraintBlock blk2 = build_width_block(sphere, 2.0 * std::sqrt(3.0));
  std::vector<ConstraintBlock> blocks2{blk2};
  CHECK(verify_feasibility(hcube, blocks2).global_max > 0.1);
}

TEST_CASE("gradient box blocks") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 5);
  Eigen::Vector2d lo(0, 0), hi(1, 1);
  auto blocks = build_gradient_box_blocks(mesh, lo, hi);
  CHECK(blocks.size() == static_cast<size_t>(mesh.simplex_count()));

  Eigen::VectorXd ok =
      interpolate([](const Vec3& p) { return 0.5 * p.x() + 0.5 * p.y(); }, mesh).values;
  CHECK(verify_feasibility(ok, blocks).global_max <= 1e-12);

  Eigen::VectorXd bad = interpolate([](const Vec3& p) { return 2.0 * p.x(); }, mesh).values;
  auto rep = verify_feasibility(bad, blocks);
  CHECK(rep.global_max == doctest::Approx(1.0).epsilon(1e-9));
  // every block violated by the same amount
  CHECK(rep.per_block.minCoeff() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gradient rows on the unit triangle") {
  // triangle (0,0), (1,0), (0,1): gradient rows recover (u1-u0, u2-u0)
  SimplicialMesh mesh;
  mesh.dim = 2;
  mesh.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  mesh.simplices = {{0, 1, 2, -1}};
  mesh.boundary_vertices = {0, 1, 2};
  mesh.finalize();
  auto blocks = build_gradient_box_blocks(mesh, Eigen::Vector2d(-9, -9), Eigen::Vector2d(9, 9));
  REQUIRE(blocks.size() == 1);
  Eigen::Vector3d u(0.3, 1.1, -0.4);
  Eigen::VectorXd g(2);
  blocks[0].op.apply(u, g);
  CHECK(g[0] == doctest::Approx(u[1] - u[0]).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(u[2] - u[0]).epsilon(1e-12));
}

TEST_CASE("lower bound block") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 4);
  // K = {(0,0)}: psi = 0
  ConstraintBlock blk = build_lower_bound_block(mesh, [](const Vec3&) { return 0.0; });
  std::vector<ConstraintBlock> blocks{blk};
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh.vertex_count());
  CHECK(verify_feasibility(zero, blocks).global_max <= 1e-15);

  // K = {y0}: the bound is attained by its own support expression
  const Vec3 y0(0.4, 0.7, 0);
  auto psi = [&](const Vec3& x) { return x.dot(y0) - 0.5 * y0.squaredNorm(); };
  ConstraintBlock blk2 = build_lower_bound_block(mesh, psi);
  Eigen::VectorXd v = interpolate(psi, mesh).values;
  std::vector<ConstraintBlock> blocks2{blk2};
  CHECK(verify_feasibility(v, blocks2).global_max <= 1e-15);
}

TEST_CASE("block triplet serialization") {
  Domain d = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(d, 2);
  auto blocks = build_convexity_blocks(mesh, sample_boundary(d, 0.5), 0.5);
  write_blocks_text(blocks, "test_blocks.txt");
  std::ifstream is("test_blocks.txt");
  std::string line;
  std::getline(is, line);  // comment
  std::getline(is, line);
  CHECK(line.find("uniform") != std::string::npos);
}

TEST_SUITE_END();
