#include "convexvar/cones1d.hpp"

#include "convexvar/envelope.hpp"

#include "doctest.h"

#include <chrono>
#include <cmath>
#include <iostream>

using namespace cvx;

namespace {

uint64_t rng_state = 12345;
double rnd() {
  rng_state = rng_state * 6364136223846793005ULL + 1442695040888963407ULL;
  return 2.0 * double(rng_state >> 11) * 0x1.0p-53 - 1.0;
}

Eigen::VectorXd oracle_project_uniform(const Eigen::VectorXd& f) {
  const int len = static_cast<int>(f.size());
  const int n = len - 1;
  Eigen::MatrixXd Ain = Eigen::MatrixXd::Zero(n - 1, len);
  for (int i = 1; i <= n - 1; ++i) {
    Ain(i - 1, i) = 2;
    Ain(i - 1, i - 1) = -1;
    Ain(i - 1, i + 1) = -1;
  }
  return qp_oracle(2.0 * Eigen::MatrixXd::Identity(len, len), -2.0 * f, Ain,
                   Eigen::VectorXd::Zero(n - 1), Eigen::MatrixXd(0, len), Eigen::VectorXd(0));
}

}  // namespace

TEST_SUITE_BEGIN("cones1d");

TEST_CASE("hinge design matrix") {
  Eigen::MatrixXd X = hinge_design_matrix(2);
  REQUIRE(X.rows() == 3);
  REQUIRE(X.cols() == 3);
  CHECK(X.col(0).isApprox(Eigen::Vector3d(1, 1, 1)));
  CHECK(X.col(1).isApprox(Eigen::Vector3d(0, 1, 2)));
  CHECK(X.col(2).isApprox(Eigen::Vector3d(0, 0, 1)));

  const int n = 7;
  Eigen::MatrixXd Xn = hinge_design_matrix(n);
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(n + 1);
  coef[0] = 2.5;
  coef[1] = -0.75;
  Eigen::VectorXd g = Xn * coef;
  for (int i = 0; i <= n; ++i) CHECK(g[i] == doctest::Approx(2.5 - 0.75 * i).epsilon(1e-14));
  // hinge columns have unit second difference at their knot
  for (int j = 1; j <= n - 1; ++j) {
    Eigen::VectorXd col = Xn.col(j + 1);
    for (int i = 1; i <= n - 1; ++i) {
      const double dd = col[i - 1] - 2 * col[i] + col[i + 1];
      CHECK(dd == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("nnls: separable cases") {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
  Eigen::VectorXd b(6);
  b << 1.5, -2.0, 0.25, -0.1, 3.0, 0.0;
  std::vector<int> warm;
  Eigen::VectorXd x = nnls_active_set(I, b, 0, warm);
  for (int i = 0; i < 6; ++i) CHECK(x[i] == doctest::Approx(std::max(b[i], 0.0)).epsilon(1e-12));

  warm.clear();
  Eigen::VectorXd xf = nnls_active_set(I, b, 6, warm);
  CHECK((xf - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("nnls: random instances vs exhaustive enumeration") {
  rng_state = 99;
  for (int t = 0; t < 40; ++t) {
    const int m = 10, nv = 6, free_count = 2;
    Eigen::MatrixXd A(m, nv);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      b[i] = rnd();
      for (int j = 0; j < nv; ++j) A(i, j) = rnd();
    }
    std::vector<int> warm;
    Eigen::VectorXd x = nnls_active_set(A, b, free_count, warm);

    // exhaustive: every subset of the constrained variables allowed nonzero
    double best = 1e300;
    Eigen::VectorXd xbest;
    const int nc = nv - free_count;
    for (int mask = 0; mask < (1 << nc); ++mask) {
      std::vector<int> cols;
      for (int j = 0; j < free_count; ++j) cols.push_back(j);
      for (int j = 0; j < nc; ++j)
        if (mask & (1 << j)) cols.push_back(free_count + j);
      Eigen::MatrixXd Ap(m, cols.size());
      for (size_t k = 0; k < cols.size(); ++k) Ap.col(k) = A.col(cols[k]);
      Eigen::VectorXd sol = Ap.colPivHouseholderQr().solve(b);
      bool ok = true;
      for (size_t k = 0; k < cols.size(); ++k)
        if (cols[k] >= free_count && sol[k] < -1e-10) ok = false;
      if (!ok) continue;
      const double r = (Ap * sol - b).squaredNorm();
      if (r < best - 1e-12) {
        best = r;
        xbest = Eigen::VectorXd::Zero(nv);
        for (size_t k = 0; k < cols.size(); ++k) xbest[cols[k]] = sol[k];
      }
    }
    CHECK((x - xbest).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("uniform projection: worked examples") {
  Hinge1DWorkspace ws;
  Eigen::Vector3d f(0, 1, 0);
  Eigen::VectorXd g = project_uniform_convex(f, ws);
  for (int i = 0; i < 3; ++i) CHECK(g[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  Hinge1DWorkspace ws2;
  Eigen::Vector3d fc(0, -1, 0);  // already convex
  Eigen::VectorXd gc = project_uniform_convex(fc, ws2);
  CHECK((gc - fc).cwiseAbs().maxCoeff() <= 1e-12);

  Hinge1DWorkspace ws3;
  Eigen::Vector4d fa(0, 1, 2, 3);  // affine: lineality space
  Eigen::VectorXd ga = project_uniform_convex(fa, ws3);
  CHECK((ga - fa).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("uniform projection: oracle, KKT, Moreau, idempotence") {
  rng_state = 2024;
  double worst_oracle = 0, worst_kkt = 0, worst_idem = 0, worst_moreau = 0;
  for (int t = 0; t < 200; ++t) {
    const int len = 3 + static_cast<int>((rnd() + 1) * 4.99);
    Eigen::VectorXd f(len);
    for (int i = 0; i < len; ++i) f[i] = 2.0 * rnd();
    Hinge1DWorkspace ws;
    Eigen::VectorXd g = project_uniform_convex(f, ws);
    worst_oracle = std::max(worst_oracle, (g - oracle_project_uniform(f)).cwiseAbs().maxCoeff());
    ConeSpec spec{ConeSpec::Kind::UniformConvex1D, len, 1.0};
    worst_kkt = std::max(worst_kkt, projection_kkt_residual(f, g, spec));
    Eigen::VectorXd gg = project_uniform_convex(g, ws);
    worst_idem = std::max(worst_idem, (gg - g).cwiseAbs().maxCoeff());
    worst_moreau = std::max(worst_moreau, std::abs((f - g).dot(g)) / (1 + f.squaredNorm()));
  }
  CHECK(worst_oracle <= 1e-8);
  CHECK(worst_kkt <= 1e-8);
  CHECK(worst_idem <= 1e-12);
  CHECK(worst_moreau <= 1e-9);
}

TEST_CASE("uniform projection: firm nonexpansiveness spot check") {
  rng_state = 777;
  const int len = 9;
  Hinge1DWorkspace ws;
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd f1(len), f2(len);
    for (int i = 0; i < len; ++i) {
      f1[i] = rnd();
      f2[i] = rnd();
    }
    Eigen::VectorXd g1 = project_uniform_convex(f1, ws);
    Eigen::VectorXd g2 = project_uniform_convex(f2, ws);
    CHECK((g1 - g2).norm() <= (f1 - f2).norm() + 1e-12);
  }
}

TEST_CASE("uniform projection: warm start equals cold start, and is faster") {
  rng_state = 555;
  const int len = 200;
  Eigen::VectorXd base(len);
  for (int i = 0; i < len; ++i) base[i] = 0.01 * i * i * 0.05 + 0.3 * rnd();

  Hinge1DWorkspace warm_ws;
  project_uniform_convex(base, warm_ws);  // prime the active set

  double cold_time = 0, warm_time = 0, worst = 0;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd f = base;
    for (int i = 0; i < len; ++i) f[i] += 0.001 * rnd();

    Hinge1DWorkspace cold_ws;
    auto t0 = std::chrono::steady_clock::now();
    Eigen::VectorXd gc = project_uniform_convex(f, cold_ws);
    auto t1 = std::chrono::steady_clock::now();
    Eigen::VectorXd gw = project_uniform_convex(f, warm_ws);
    auto t2 = std::chrono::steady_clock::now();
    cold_time += std::chrono::duration<double>(t1 - t0).count();
    warm_time += std::chrono::duration<double>(t2 - t1).count();
    worst = std::max(worst, (gc - gw).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
  std::cout << "[cones1d] warm-start speedup on n=200 perturbed inputs: "
            << cold_time / std::max(warm_time, 1e-12) << "x\n";
}

TEST_CASE("cyclic projection: fixed points and feasibility push") {
  CyclicWorkspace ws;
  const int n = 12;
  const double w = 0.9;
  Eigen::VectorXd c0 = Eigen::VectorXd::Constant(n, 2.0);
  CHECK((project_weighted_cyclic(c0, w, ws) - c0).cwiseAbs().maxCoeff() <= 1e-12);

  CyclicWorkspace ws2;
  Eigen::VectorXd cneg = Eigen::VectorXd::Constant(n, -1.0);
  Eigen::VectorXd gneg = project_weighted_cyclic(cneg, w, ws2);
  CHECK(gneg.minCoeff() > -1.0);  // moved toward feasibility
  ConeSpec spec{ConeSpec::Kind::WeightedCyclicConvex1D, n, w};
  CHECK(projection_kkt_residual(cneg, gneg, spec) <= 1e-8);

  // cosine samples satisfy the w = cos(eps) constraints with equality
  CyclicWorkspace ws3;
  const double eps = 2 * M_PI / n;
  Eigen::VectorXd cosf(n);
  for (int i = 0; i < n; ++i) cosf[i] = std::cos(eps * i);
  Eigen::VectorXd gcos = project_weighted_cyclic(cosf, std::cos(eps), ws3);
  CHECK((gcos - cosf).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("cyclic projection: oracle and warm start") {
  rng_state = 31337;
  double worst_oracle = 0, worst_warm = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + static_cast<int>((rnd() + 1) * 3.49);
    const double w = (t % 4 == 0) ? std::cos(2 * M_PI / n) : 0.4 + 0.3 * (rnd() + 1);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = 2 * rnd();
    CyclicWorkspace ws;
    Eigen::VectorXd g = project_weighted_cyclic(f, w, ws);

    Eigen::MatrixXd Ain = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      Ain(i, i) = w;
      Ain(i, (i + 1) % n) = -0.5;
      Ain(i, (i + n - 1) % n) = -0.5;
    }
    Eigen::VectorXd go =
        qp_oracle(2.0 * Eigen::MatrixXd::Identity(n, n), -2.0 * f, Ain,
                  Eigen::VectorXd::Zero(n), Eigen::MatrixXd(0, n), Eigen::VectorXd(0));
    worst_oracle = std::max(worst_oracle, (g - go).cwiseAbs().maxCoeff());

    CyclicWorkspace ws2;
    Eigen::VectorXd fp = f;
    for (int i = 0; i < n; ++i) fp[i] += 0.05 * rnd();
    project_weighted_cyclic(fp, w, ws2);
    Eigen::VectorXd g2 = project_weighted_cyclic(f, w, ws2);
    worst_warm = std::max(worst_warm, (g - g2).cwiseAbs().maxCoeff());
  }
  CHECK(worst_oracle <= 1e-8);
  CHECK(worst_warm <= 1e-12);
}

TEST_SUITE_END();
