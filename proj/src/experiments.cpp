#include "convexvar/experiments.hpp"

#include "convexvar/constraints.hpp"

#include <cmath>

namespace cvx {

uint64_t Rng::next_u64() {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

namespace {

double weighted_l2(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  double acc = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += w[i] * v[i] * v[i];
  return std::sqrt(acc);
}

std::vector<ConstraintBlock> convexity_blocks_for(const SimplicialMesh& mesh,
                                                  const Domain& domain, double eps,
                                                  double boundary_spacing) {
  const double bs = boundary_spacing > 0 ? boundary_spacing : eps;
  std::vector<Vec3> U = sample_boundary(domain, bs);
  return build_convexity_blocks(mesh, U, eps);
}

}  // namespace

ProjectionResult project_onto_convex(const SimplicialMesh& mesh, const Domain& domain,
                                     const Eigen::VectorXd& target, double eps,
                                     const SolverConfig& solver, double boundary_spacing) {
  QuadratureTable q = assemble_quadrature(mesh);
  SdmmProblem prob;
  prob.dim = mesh.vertex_count();
  prob.blocks.push_back(
      {BlockOp::identity(prob.dim), ProxTerm::scaled_l2(target, q.lumped_mass)});
  auto blocks = convexity_blocks_for(mesh, domain, eps, boundary_spacing);
  for (auto& blk : blocks) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});

  auto [x, rep] = sdmm_solve(prob, solver, target);
  ProjectionResult out;
  out.u = std::move(x);
  out.block_count = blocks.size();
  out.report = std::move(rep);
  out.feasibility = verify_feasibility(out.u, blocks).global_max;
  return out;
}

DenoiseResult run_denoise(const DenoiseConfig& cfg) {
  if (cfg.dim != 2 && cfg.dim != 3) throw std::invalid_argument("run_denoise: dim 2 or 3");
  DenoiseResult out;
  const Vec3 lo = cfg.dim == 2 ? Vec3(-1, -1, 0) : Vec3(-1, -1, -1);
  const Vec3 hi = cfg.dim == 2 ? Vec3(1, 1, 0) : Vec3(1, 1, 1);
  Domain domain = Domain::box(cfg.dim, lo, hi);
  out.mesh = build_grid_mesh(domain, cfg.cells);
  out.delta = out.mesh.max_edge_length;
  out.eps = cfg.eps > 0 ? cfg.eps : cfg.eps_factor * out.delta;

  auto u_star_fn = [&](const Vec3& p) {
    double v = p.x() * p.x() / 3.0 + p.y() * p.y() / 4.0;
    if (cfg.dim == 3) v += p.z() * p.z() / 8.0;
    return v;
  };
  out.u_star = interpolate(u_star_fn, out.mesh).values;
  Rng rng(cfg.seed);
  out.u_noisy = out.u_star;
  for (Eigen::Index i = 0; i < out.u_noisy.size(); ++i) out.u_noisy[i] += cfg.noise * rng.normal();

  ProjectionResult pr = project_onto_convex(out.mesh, domain, out.u_noisy, out.eps, cfg.solver);
  out.u = std::move(pr.u);
  out.feasibility = pr.feasibility;
  out.block_count = pr.block_count;
  out.report = std::move(pr.report);

  QuadratureTable q = assemble_quadrature(out.mesh);
  out.l2_before = weighted_l2(out.u_noisy - out.u_star, q.lumped_mass);
  out.l2_after = weighted_l2(out.u - out.u_star, q.lumped_mass);
  out.ustar_l2 = weighted_l2(out.u_star, q.lumped_mass);
  out.linf_after = (out.u - out.u_star).cwiseAbs().maxCoeff();
  return out;
}

SupportDenoiseResult run_project_support(const SupportDenoiseConfig& cfg) {
  SupportDenoiseResult out;
  out.sphere = build_sphere_mesh(cfg.level);
  Polytope ico = unit_icosahedron();
  out.h_star = support_of_polytope(ico, out.sphere).values;
  Rng rng(cfg.seed);
  out.h_noisy = out.h_star;
  for (Eigen::Index i = 0; i < out.h_noisy.size(); ++i) out.h_noisy[i] += cfg.noise * rng.normal();

  auto circles = sample_great_circles(cfg.circles, cfg.step, cfg.seed);
  auto blocks = build_spherical_blocks(out.sphere, circles);

  const Eigen::VectorXd w = out.sphere.area_weights();
  SdmmProblem prob;
  prob.dim = out.sphere.count();
  prob.blocks.push_back({BlockOp::identity(prob.dim), ProxTerm::scaled_l2(out.h_noisy, w)});
  for (auto& blk : blocks) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});

  auto [x, rep] = sdmm_solve(prob, cfg.solver, out.h_noisy);
  out.h = std::move(x);
  out.report = std::move(rep);
  out.feasibility = verify_feasibility(out.h, blocks).global_max;
  out.l2_before = weighted_l2(out.h_noisy - out.h_star, w);
  out.l2_after = weighted_l2(out.h - out.h_star, w);

  SupportField hf{out.h, &out.sphere};
  out.width = width_stats(hf);
  out.body = reconstruct_body(hf).body;
  return out;
}

LinearPaResult run_linear_pa(const LinearPaConfig& cfg) {
  LinearPaResult out;
  Domain domain = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  out.mesh = build_grid_mesh(domain, cfg.points_per_axis - 1);
  LinearPa pa = assemble_linear_pa(out.mesh);
  auto conv = convexity_blocks_for(out.mesh, domain, cfg.eps, 0);
  ConstraintBlock bound = build_lower_bound_block(out.mesh, [](const Vec3&) { return 0.0; });

  const int n = out.mesh.vertex_count();
  SdmmProblem prob;
  prob.dim = n;
  prob.blocks.push_back({BlockOp::identity(n), pa.objective});
  prob.blocks.push_back({bound.op, ProxTerm::indicator(bound.cone)});
  for (auto& blk : pa.gradient_box) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});
  for (auto& blk : conv) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});

  const double a = 2.0 / 3.0, b = (4.0 - std::sqrt(2.0)) / 3.0;
  auto u_opt_fn = [&](const Vec3& p) {
    return std::max({0.0, p.x() - a, p.y() - a, p.x() + p.y() - b});
  };
  out.u_opt = interpolate(u_opt_fn, out.mesh).values;

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);  // the lower bound
  auto [x, rep] = sdmm_solve(prob, cfg.solver, x0);
  out.u = std::move(x);
  out.report = std::move(rep);

  out.M = pa.objective.linear_c.dot(out.u);
  out.M_opt = pa.objective.linear_c.dot(out.u_opt);
  out.linf_err = (out.u - out.u_opt).cwiseAbs().maxCoeff();

  std::vector<ConstraintBlock> all;
  all.push_back(bound);
  for (auto& blk : pa.gradient_box) all.push_back(blk);
  for (auto& blk : conv) all.push_back(blk);
  out.feasibility = verify_feasibility(out.u, all).global_max;
  return out;
}

RadialPaResult run_radial_pa(const RadialPaConfig& cfg) {
  RadialPaResult out;
  Domain domain = Domain::ball(2, Vec3(0, 0, 0), 1.0);
  out.mesh = build_disk_mesh(domain, cfg.delta);
  GeometricPa pa = assemble_geometric_pa(
      out.mesh, [](const Vec3&) { return 1.0; }, {Vec3(0, 0, 0)});

  // boundary samples: mesh boundary vertices subsampled at the constraint step
  std::vector<Vec3> U = subsample_mesh_boundary(out.mesh, cfg.eps);
  auto conv = build_convexity_blocks(out.mesh, U, cfg.eps);

  const int n = out.mesh.vertex_count();
  SdmmProblem prob;
  prob.dim = n;
  prob.blocks.push_back({BlockOp::identity(n), pa.objective});
  prob.blocks.push_back({pa.lower_bound.op, ProxTerm::indicator(pa.lower_bound.cone)});
  for (auto& blk : conv) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  auto [x, rep] = sdmm_solve(prob, cfg.solver, x0);
  out.u = std::move(x);
  out.report = std::move(rep);

  out.oracle = radial_pa_oracle(cfg.oracle_n);
  out.L = pa.objective.value(out.u);
  out.L_oracle = out.oracle.objective;
  double err = 0;
  for (int i = 0; i < n; ++i)
    err = std::max(err, std::abs(out.u[i] - out.oracle.value_at(out.mesh.vertices[i].norm())));
  out.linf_err_vs_oracle = err;

  std::vector<ConstraintBlock> all;
  all.push_back(pa.lower_bound);
  for (auto& blk : conv) all.push_back(blk);
  out.feasibility = verify_feasibility(out.u, all).global_max;
  return out;
}

RochetChoneResult run_rochet_chone(const RochetChoneConfig& cfg) {
  RochetChoneResult out;
  Domain domain = Domain::box(2, Vec3(1, 1, 0), Vec3(2, 2, 0));
  out.mesh = build_grid_mesh(domain, cfg.cells);
  GeometricPa pa = assemble_geometric_pa(
      out.mesh, [](const Vec3&) { return 1.0; }, {Vec3(0, 0, 0)});
  auto conv = convexity_blocks_for(out.mesh, domain, cfg.eps, 0);

  const int n = out.mesh.vertex_count();
  SdmmProblem prob;
  prob.dim = n;
  prob.blocks.push_back({BlockOp::identity(n), pa.objective});
  prob.blocks.push_back({pa.lower_bound.op, ProxTerm::indicator(pa.lower_bound.cone)});
  for (auto& blk : conv) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});

  Eigen::VectorXd x0(n);
  for (int i = 0; i < n; ++i) x0[i] = std::max(0.0, pa.lower_bound.cone.lower[i]);
  auto [x, rep] = sdmm_solve(prob, cfg.solver, x0);
  out.u = std::move(x);
  out.report = std::move(rep);
  out.L = pa.objective.value(out.u);

  QuadratureTable q = assemble_quadrature(out.mesh);
  out.gradients.resize(out.mesh.simplex_count(), 2);
  for (int s = 0; s < out.mesh.simplex_count(); ++s) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    const auto& sx = out.mesh.simplices[s];
    for (int k = 0; k <= 2; ++k) g += q.grad[s].col(k).head<2>() * out.u[sx[k]];
    out.gradients.row(s) = g.transpose();
  }

  std::vector<ConstraintBlock> all;
  all.push_back(pa.lower_bound);
  for (auto& blk : conv) all.push_back(blk);
  out.feasibility = verify_feasibility(out.u, all).global_max;
  return out;
}

WidthResult run_constant_width(const WidthConfig& cfg) {
  if (cfg.p != 1 && cfg.p != 2 && cfg.p != 0)
    throw std::invalid_argument("run_constant_width: p must be 1, 2 or 0 (infinity)");
  WidthResult out;
  out.sphere = build_sphere_mesh(cfg.level);
  Polytope simplex = regular_tetrahedron(1.0);
  out.h0 = support_of_polytope(simplex, out.sphere).values;

  auto circles = sample_great_circles(cfg.circles, cfg.step, cfg.seed);
  auto blocks = build_spherical_blocks(out.sphere, circles);
  ConstraintBlock width_blk = build_width_block(out.sphere, cfg.alpha);

  const int n = out.sphere.count();
  const Eigen::VectorXd w = out.sphere.area_weights();
  SdmmProblem prob;
  prob.dim = n;
  if (cfg.p == 2)
    prob.blocks.push_back({BlockOp::identity(n), ProxTerm::scaled_l2(out.h0, w)});
  else if (cfg.p == 1)
    prob.blocks.push_back({BlockOp::identity(n), ProxTerm::l1(out.h0, w)});
  else
    prob.blocks.push_back({BlockOp::identity(n), ProxTerm::linf(out.h0)});
  prob.blocks.push_back({width_blk.op, ProxTerm::indicator(width_blk.cone)});
  for (auto& blk : blocks) prob.blocks.push_back({blk.op, ProxTerm::indicator(blk.cone)});

  auto [x, rep] = sdmm_solve(prob, cfg.solver, out.h0);
  out.h = std::move(x);
  out.report = std::move(rep);

  std::vector<ConstraintBlock> all;
  all.push_back(width_blk);
  for (auto& blk : blocks) all.push_back(blk);
  out.feasibility = verify_feasibility(out.h, all).global_max;

  SupportField hf{out.h, &out.sphere};
  out.width = width_stats(hf);
  out.body = reconstruct_body(hf).body;
  out.volume = volume(out.body);
  out.surface = surface_area(out.body);
  return out;
}

ChoneLemeurResult run_chone_lemeur(int cells, double eps, const SolverConfig& solver) {
  ChoneLemeurResult out;
  out.cells = cells;
  out.eps = eps;
  Domain domain = Domain::box(2, Vec3(0, 0, 0), Vec3(1, 1, 0));
  SimplicialMesh mesh = build_grid_mesh(domain, cells);
  out.delta = mesh.max_edge_length;
  Eigen::VectorXd f =
      interpolate([](const Vec3& p) { return std::max(0.0, p.x() + p.y() - 1.0); }, mesh).values;

  // boundary spacing 2*eps keeps the covering radius at eps
  ProjectionResult pr = project_onto_convex(mesh, domain, f, eps, solver, 2.0 * eps);
  out.feasibility = pr.feasibility;
  out.report = std::move(pr.report);
  out.max_err = (pr.u - f).cwiseAbs().maxCoeff();
  const int nv = cells + 1;
  const int corner_ul = cells * nv;  // (0, 1)
  const int corner_lr = cells;       // (1, 0)
  out.corner_err =
      std::max(std::abs(pr.u[corner_ul] - f[corner_ul]), std::abs(pr.u[corner_lr] - f[corner_lr]));
  return out;
}

}  // namespace cvx
