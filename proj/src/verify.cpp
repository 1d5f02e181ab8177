#include "convexvar/verify.hpp"

#include "convexvar/constraints.hpp"

#include <cmath>
#include <sstream>

namespace cvx {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::vector<CheckResult> verify_lemma_2_12() {
  std::vector<CheckResult> out;
  Domain domain = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  const Vec3 x0(0.5, 0.5, 0);
  for (double delta_target : {0.1, 0.05}) {
    const int cells = static_cast<int>(std::ceil(std::sqrt(2.0) / delta_target));
    SimplicialMesh mesh = build_grid_mesh(domain, cells);
    const double delta = mesh.max_edge_length;
    const double eps = 2.0 * delta;
    Eigen::VectorXd s_delta =
        interpolate([&](const Vec3& p) { return (p - x0).squaredNorm(); }, mesh).values;
    auto blocks = build_convexity_blocks(mesh, sample_boundary(domain, eps), eps);
    auto rep = verify_feasibility(s_delta, blocks);
    CheckResult c;
    c.name = "lemma-2.12 delta=" + fmt(delta);
    c.measured = rep.max_signed;
    c.bound = delta * delta - eps * eps;
    c.pass = c.measured <= c.bound + 1e-12;
    c.detail = "max ell = " + fmt(c.measured) + " vs delta^2-eps^2 = " + fmt(c.bound);
    out.push_back(c);
  }
  return out;
}

std::vector<CheckResult> verify_lemma_3_5() {
  std::vector<CheckResult> out;
  SphereMesh sphere = build_sphere_mesh(2);
  auto circles = sample_great_circles(60, 0.1, 7);
  auto blocks = build_spherical_blocks(sphere, circles);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sphere.count());
  const double eps = circles.front().eps;
  const double expected = std::cos(eps) - 1.0;

  double worst_dev = 0;
  Eigen::VectorXd vals;
  for (const auto& blk : blocks) {
    const int n = blk.op.nrows();
    vals.resize(n);
    blk.op.apply(ones, vals);
    for (int i = 0; i < n; ++i) {
      const double ell =
          blk.cone.weight * vals[i] - 0.5 * (vals[(i + n - 1) % n] + vals[(i + 1) % n]);
      worst_dev = std::max(worst_dev, std::abs(ell - expected));
    }
  }
  CheckResult exact;
  exact.name = "lemma-3.5 exact value";
  exact.measured = worst_dev;
  exact.bound = 1e-12;
  exact.pass = worst_dev <= 1e-12;
  exact.detail = "max |ell(1) - (cos eps - 1)| = " + fmt(worst_dev);
  out.push_back(exact);

  CheckResult strict;
  strict.name = "lemma-3.5 interior margin";
  strict.measured = expected;
  strict.bound = -eps * eps / 5.0;
  strict.pass = expected <= strict.bound;
  strict.detail = "cos(eps)-1 = " + fmt(expected) + " <= -eps^2/5 = " + fmt(strict.bound);
  out.push_back(strict);
  return out;
}

std::vector<CheckResult> verify_chone_lemeur(bool include_finest, const SolverConfig& solver) {
  std::vector<CheckResult> out;
  std::vector<int> grids = {10, 20};
  if (include_finest) grids.push_back(40);

  for (int cells : grids) {
    const double delta = 1.0 / cells;
    SolverConfig cfg = solver;
    ChoneLemeurResult r = run_chone_lemeur(cells, delta / 8.0, cfg);
    CheckResult c;
    c.name = "chone-lemeur corner, grid 1/" + std::to_string(cells) + " eps=delta/8";
    c.measured = r.corner_err;
    c.bound = 0.15;
    c.pass = r.corner_err >= 0.15;
    c.detail = "corner error " + fmt(r.corner_err) + " (max " + fmt(r.max_err) + ", " +
               std::to_string(r.report.iterations) + " iters)";
    out.push_back(c);
  }

  double prev = -1;
  bool monotone = true;
  std::string seq;
  for (int cells : std::vector<int>{10, 20, 40}) {
    const double delta = 1.0 / cells;
    ChoneLemeurResult r = run_chone_lemeur(cells, 2.0 * delta, solver);
    CheckResult c;
    c.name = "chone-lemeur relaxed, grid 1/" + std::to_string(cells) + " eps=2delta";
    c.measured = r.max_err;
    c.bound = 0.05;
    c.pass = r.max_err <= 0.05;
    c.detail = "max error " + fmt(r.max_err);
    out.push_back(c);
    if (prev >= 0 && r.max_err > prev + 1e-6) monotone = false;
    seq += fmt(r.max_err) + " ";
    prev = r.max_err;
  }
  CheckResult mono;
  mono.name = "chone-lemeur relaxed error decreases with delta";
  mono.measured = monotone ? 1 : 0;
  mono.bound = 1;
  mono.pass = monotone;
  mono.detail = "errors: " + seq;
  out.push_back(mono);
  return out;
}

std::vector<CheckResult> verify_cones_oracle(int instances, uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  double worst_uniform = 0, worst_cyclic = 0, worst_warm = 0, worst_kkt = 0;
  for (int it = 0; it < instances; ++it) {
    // uniform cone, length 3..12
    {
      const int len = 3 + static_cast<int>(rng.next_u64() % 10);
      const int n = len - 1;
      Eigen::VectorXd f(len);
      for (int i = 0; i < len; ++i) f[i] = 2.0 * rng.normal();
      Hinge1DWorkspace ws;
      Eigen::VectorXd g = project_uniform_convex(f, ws);

      Eigen::MatrixXd Ain = Eigen::MatrixXd::Zero(n - 1, len);
      for (int i = 1; i <= n - 1; ++i) {
        Ain(i - 1, i) = 2;
        Ain(i - 1, i - 1) = -1;
        Ain(i - 1, i + 1) = -1;
      }
      Eigen::VectorXd go =
          qp_oracle(2.0 * Eigen::MatrixXd::Identity(len, len), -2.0 * f, Ain,
                    Eigen::VectorXd::Zero(n - 1), Eigen::MatrixXd(0, len), Eigen::VectorXd(0));
      worst_uniform = std::max(worst_uniform, (g - go).cwiseAbs().maxCoeff());
      ConeSpec spec{ConeSpec::Kind::UniformConvex1D, len, 1.0};
      worst_kkt = std::max(worst_kkt, projection_kkt_residual(f, g, spec));

      // warm equals cold after a perturbed call
      Hinge1DWorkspace ws2;
      Eigen::VectorXd fp = f;
      for (int i = 0; i < len; ++i) fp[i] += 0.05 * rng.normal();
      project_uniform_convex(fp, ws2);
      Eigen::VectorXd g2 = project_uniform_convex(f, ws2);
      worst_warm = std::max(worst_warm, (g - g2).cwiseAbs().maxCoeff());
    }
    // weighted cyclic cone, length 4..12
    {
      const int n = 4 + static_cast<int>(rng.next_u64() % 9);
      double w = 0.5 + 0.5 * rng.uniform();
      if (it % 3 == 0) w = std::cos(2.0 * M_PI / n);  // the great-circle weight
      Eigen::VectorXd f(n);
      for (int i = 0; i < n; ++i) f[i] = 2.0 * rng.normal();
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
      worst_cyclic = std::max(worst_cyclic, (g - go).cwiseAbs().maxCoeff());
      ConeSpec spec{ConeSpec::Kind::WeightedCyclicConvex1D, n, w};
      worst_kkt = std::max(worst_kkt, projection_kkt_residual(f, g, spec));

      CyclicWorkspace ws2;
      Eigen::VectorXd fp = f;
      for (int i = 0; i < n; ++i) fp[i] += 0.05 * rng.normal();
      project_weighted_cyclic(fp, w, ws2);
      Eigen::VectorXd g2 = project_weighted_cyclic(f, w, ws2);
      worst_warm = std::max(worst_warm, (g - g2).cwiseAbs().maxCoeff());
    }
  }

  auto push = [&](const std::string& name, double measured, double bound) {
    CheckResult c;
    c.name = name;
    c.measured = measured;
    c.bound = bound;
    c.pass = measured <= bound;
    c.detail = fmt(measured) + " <= " + fmt(bound);
    out.push_back(c);
  };
  push("cones-oracle uniform vs exhaustive", worst_uniform, 1e-8);
  push("cones-oracle cyclic vs exhaustive", worst_cyclic, 1e-8);
  push("cones-oracle warm equals cold", worst_warm, 1e-12);
  push("cones-oracle KKT residual", worst_kkt, 1e-8);
  return out;
}

std::vector<CheckResult> verify_interpolation(uint64_t seed) {
  std::vector<CheckResult> out;
  Domain domain = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(domain, 24);
  const double delta = mesh.max_edge_length;
  Rng rng(seed);

  struct TestFn {
    std::function<double(const Vec3&)> f;
    double lip;       // closed-form Lipschitz constant on the domain
    double lip_grad;  // closed-form gradient Lipschitz constant
  };
  std::vector<TestFn> battery;
  for (int k = 0; k < 10; ++k) {  // random quadratics
    Eigen::Matrix2d A;
    const double a = 2.0 * rng.normal(), b = 2.0 * rng.normal(), c = rng.normal();
    A << a, c, c, b;
    Eigen::Vector2d bvec(rng.normal(), rng.normal());
    double lip = 0;
    for (int cx = 0; cx <= 1; ++cx)
      for (int cy = 0; cy <= 1; ++cy)
        lip = std::max(lip, (A * Eigen::Vector2d(cx, cy) + bvec).norm());
    const double lg = std::sqrt((A.transpose() * A).eigenvalues().real().maxCoeff());
    battery.push_back({[A, bvec](const Vec3& p) {
                         Eigen::Vector2d x(p.x(), p.y());
                         return 0.5 * x.dot(A * x) + bvec.dot(x);
                       },
                       lip, lg});
  }
  for (int k = 0; k < 5; ++k) {  // products of sines (Lip bounded by c|k|)
    const double c = 0.5 + rng.uniform();
    const double k1 = 1.0 + 2.0 * rng.uniform(), k2 = 1.0 + 2.0 * rng.uniform();
    const double ph = 2 * M_PI * rng.uniform();
    const double knorm = std::sqrt(k1 * k1 + k2 * k2);
    battery.push_back({[c, k1, k2, ph](const Vec3& p) {
                         return c * std::sin(k1 * p.x() + ph) * std::cos(k2 * p.y());
                       },
                       c * knorm, c * knorm * knorm});
  }
  for (int k = 0; k < 5; ++k) {  // smoothed distance functions
    const double a = 0.5 + rng.uniform();
    const Vec3 p0(rng.uniform(), rng.uniform(), 0);
    double rmax = 0;
    for (int cx = 0; cx <= 1; ++cx)
      for (int cy = 0; cy <= 1; ++cy)
        rmax = std::max(rmax, (Vec3(cx, cy, 0) - p0).norm());
    battery.push_back({[a, p0](const Vec3& p) {
                         return std::sqrt(a + (p - p0).squaredNorm());
                       },
                       rmax / std::sqrt(a + rmax * rmax), 1.0 / std::sqrt(a)});
  }

  double worst_l1 = 0, worst_l2 = 0, worst_l3 = 0;
  for (const auto& tf : battery) {
    NodalField field = interpolate(tf.f, mesh);
    worst_l1 = std::max(worst_l1, lipschitz_constant(field) / tf.lip);
    Rng prng(seed ^ 0x5bd1e995);
    for (int probe = 0; probe < 1000; ++probe) {
      const Vec3 x(prng.uniform(), prng.uniform(), 0);
      const auto loc = mesh.locate(x);
      const double err = std::abs(tf.f(x) - field(loc));
      worst_l2 = std::max(worst_l2, err / (delta * tf.lip));
      worst_l3 = std::max(worst_l3, err / (0.5 * delta * delta * tf.lip_grad));
    }
  }
  auto push = [&](const std::string& name, double measured, double bound,
                  const std::string& detail) {
    CheckResult c;
    c.name = name;
    c.measured = measured;
    c.bound = bound;
    c.pass = measured <= bound;
    c.detail = detail;
    out.push_back(c);
  };
  push("interp (L1) Lip ratio, C_I = 1", worst_l1, 1.0 + 1e-12,
       "max Lip(I f)/Lip(f) = " + fmt(worst_l1));
  push("interp (L2) error / (delta Lip)", worst_l2, 1.0 + 1e-12,
       "max ratio " + fmt(worst_l2));
  push("interp (L3) error / (delta^2 Lip(grad)/2)", worst_l3, 1.0 + 1e-12,
       "max ratio " + fmt(worst_l3));
  return out;
}

std::vector<CheckResult> verify_envelope_bound(int fields, uint64_t seed,
                                               const SolverConfig& solver) {
  std::vector<CheckResult> out;
  Domain domain = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(domain, 12);
  const double delta = mesh.max_edge_length;
  const double eps = 2.0 * delta;
  const int d = 2;
  Rng rng(seed);

  double worst_excess = -std::numeric_limits<double>::infinity();
  double max_ratio = 0;
  for (int k = 0; k < fields; ++k) {
    Eigen::VectorXd raw(mesh.vertex_count());
    for (int i = 0; i < mesh.vertex_count(); ++i) raw[i] = 0.5 * rng.normal();
    ProjectionResult pr = project_onto_convex(mesh, domain, raw, eps, solver);
    NodalField g{pr.u, &mesh};
    const double lip = lipschitz_constant(g);
    EnvelopeResult env = convex_envelope(g);
    const double bound = 12.0 * d * eps * lip;
    worst_excess = std::max(worst_excess, env.max_gap - bound);
    if (lip > 1e-12) max_ratio = std::max(max_ratio, env.max_gap / (eps * lip));
  }
  CheckResult c;
  c.name = "prop-2.5 envelope gap <= 12 d eps Lip";
  c.measured = worst_excess;
  c.bound = 1e-6;
  c.pass = worst_excess <= 1e-6;
  c.detail = "max excess " + fmt(worst_excess) + "; sharp empirical gap/(eps Lip) = " +
             fmt(max_ratio) + " vs proof constant " + fmt(12.0 * d);
  out.push_back(c);
  return out;
}

std::vector<CheckResult> verify_sdmm_oracle(const SolverConfig& solver) {
  std::vector<CheckResult> out;
  Domain domain = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(domain, 4);
  const double eps = 0.5;
  auto blocks = build_convexity_blocks(mesh, sample_boundary(domain, eps), eps);
  QuadratureTable q = assemble_quadrature(mesh);
  const int n = mesh.vertex_count();

  // inequality rows: ell at the middle point of each 3-point segment
  int total_rows = 0;
  for (const auto& blk : blocks) total_rows += blk.op.nrows() - 2;
  Eigen::MatrixXd Ain = Eigen::MatrixXd::Zero(total_rows, n);
  int r = 0;
  for (const auto& blk : blocks) {
    for (int i = 1; i + 1 < blk.op.nrows(); ++i) {
      auto add = [&](const EvalRow& row, double scale) {
        for (size_t k = 0; k < row.idx.size(); ++k) Ain(r, row.idx[k]) += scale * row.w[k];
      };
      add(blk.op.materialize_row(i), 1.0);
      add(blk.op.materialize_row(i - 1), -0.5);
      add(blk.op.materialize_row(i + 1), -0.5);
      ++r;
    }
  }

  double worst = 0, gamma_spread = 0;
  for (uint64_t seed : {11u, 22u, 33u}) {
    Rng rng(seed);
    Eigen::VectorXd u0 =
        interpolate([](const Vec3& p) { return p.squaredNorm(); }, mesh).values;
    for (int i = 0; i < n; ++i) u0[i] += 0.3 * rng.normal();

    Eigen::VectorXd go = qp_oracle(2.0 * Eigen::MatrixXd(q.lumped_mass.asDiagonal()),
                                   -2.0 * (q.lumped_mass.asDiagonal() * u0), Ain,
                                   Eigen::VectorXd::Zero(total_rows), Eigen::MatrixXd(0, n),
                                   Eigen::VectorXd(0));

    SdmmProblem prob;
    prob.dim = n;
    prob.blocks.push_back({BlockOp::identity(n), ProxTerm::scaled_l2(u0, q.lumped_mass)});
    for (const auto& blk : blocks) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});
    auto [x, rep] = sdmm_solve(prob, solver, u0);
    worst = std::max(worst, (x - go).cwiseAbs().maxCoeff());

    // gamma robustness of the converged objective
    double obj_min = std::numeric_limits<double>::infinity(), obj_max = -obj_min;
    for (double gamma : {0.1, 1.0, 10.0}) {
      SolverConfig cfg = solver;
      cfg.gamma = gamma;
      auto [xg, repg] = sdmm_solve(prob, cfg, u0);
      double obj = 0;
      for (int i = 0; i < n; ++i) obj += q.lumped_mass[i] * (xg[i] - u0[i]) * (xg[i] - u0[i]);
      obj_min = std::min(obj_min, obj);
      obj_max = std::max(obj_max, obj);
    }
    gamma_spread = std::max(gamma_spread, obj_max - obj_min);
  }

  CheckResult c;
  c.name = "sdmm vs qp oracle (5x5 denoising)";
  c.measured = worst;
  c.bound = 1e-5;
  c.pass = worst <= 1e-5;
  c.detail = "max |x - oracle|_inf = " + fmt(worst);
  out.push_back(c);

  CheckResult g;
  g.name = "sdmm objective gamma-robustness";
  g.measured = gamma_spread;
  g.bound = 1e-6;
  g.pass = gamma_spread <= 1e-6;
  g.detail = "objective spread over gamma {0.1,1,10} = " + fmt(gamma_spread);
  out.push_back(g);
  return out;
}

}  // namespace cvx
