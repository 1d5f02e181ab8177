#pragma once

#include "convexvar/bodies.hpp"
#include "convexvar/envelope.hpp"
#include "convexvar/sdmm.hpp"

#include <cstdint>
#include <optional>

namespace cvx {

/// Deterministic RNG for reproducible experiments (splitmix64 + Box-Muller).
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
 private:
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// --- convex graph denoising -------------------------------------------------

struct DenoiseConfig {
  int dim = 3;
  int cells = 20;              // grid cells per axis on [-1, 1]^d
  double noise = 1.0 / 40;     // additive Gaussian scale
  double eps = 0.0;            // 0: use eps_factor * delta
  double eps_factor = 2.0;
  uint64_t seed = 1;
  SolverConfig solver;
};

struct DenoiseResult {
  SimplicialMesh mesh;
  Eigen::VectorXd u_star, u_noisy, u;
  double delta = 0, eps = 0;
  double l2_before = 0, l2_after = 0, linf_after = 0;
  double ustar_l2 = 0;
  double feasibility = 0;
  size_t block_count = 0;
  SolverReport report;
};

DenoiseResult run_denoise(const DenoiseConfig& cfg);

// --- support-function denoising ----------------------------------------------

struct SupportDenoiseConfig {
  int level = 3;        // icosphere subdivision
  int circles = 500;
  double step = 0.02;   // angular step along each circle
  double noise = 0.05;
  uint64_t seed = 1;
  SolverConfig solver;
};

struct SupportDenoiseResult {
  SphereMesh sphere;
  Eigen::VectorXd h_star, h_noisy, h;
  double l2_before = 0, l2_after = 0;
  double feasibility = 0;
  WidthStats width;
  Polytope body;
  SolverReport report;
};

SupportDenoiseResult run_project_support(const SupportDenoiseConfig& cfg);

// --- principal-agent ----------------------------------------------------------

struct LinearPaConfig {
  int points_per_axis = 30;  // grid vertices per axis on [0,1]^2
  double eps = 0.06;
  SolverConfig solver;
};

struct LinearPaResult {
  SimplicialMesh mesh;
  Eigen::VectorXd u, u_opt;
  double M = 0, M_opt = 0;
  double linf_err = 0;  // nodal, against the exact solution
  double feasibility = 0;
  SolverReport report;
};

LinearPaResult run_linear_pa(const LinearPaConfig& cfg);

struct RadialPaConfig {
  double delta = 1.0 / 30;
  double eps = 0.06;
  int oracle_n = 600;
  SolverConfig solver;
};

struct RadialPaResult {
  SimplicialMesh mesh;
  Eigen::VectorXd u;
  RadialProfile oracle;
  double L = 0, L_oracle = 0;
  double linf_err_vs_oracle = 0;  // at shared radii
  double feasibility = 0;
  SolverReport report;
};

RadialPaResult run_radial_pa(const RadialPaConfig& cfg);

struct RochetChoneConfig {
  int cells = 60;  // grid on [1,2]^2
  double eps = 0.02;
  SolverConfig solver;
};

struct RochetChoneResult {
  SimplicialMesh mesh;
  Eigen::VectorXd u;
  Eigen::MatrixXd gradients;  // per-simplex gradient rows (bunching data)
  double L = 0;
  double feasibility = 0;
  SolverReport report;
};

RochetChoneResult run_rochet_chone(const RochetChoneConfig& cfg);

// --- constant width -----------------------------------------------------------

struct WidthConfig {
  int level = 3;
  int circles = 500;
  double step = 0.02;
  int p = 2;  // 1, 2, or 0 meaning infinity
  std::optional<double> alpha;  // fixed width value; nullopt = free
  uint64_t seed = 1;
  SolverConfig solver;
};

struct WidthResult {
  SphereMesh sphere;
  Eigen::VectorXd h0, h;
  WidthStats width;
  double volume = 0, surface = 0;
  double feasibility = 0;
  Polytope body;
  SolverReport report;
};

WidthResult run_constant_width(const WidthConfig& cfg);

// --- grid non-density experiment ----------------------------------------------

struct ChoneLemeurResult {
  int cells = 0;
  double delta = 0, eps = 0;
  double max_err = 0;     // over all vertices
  double corner_err = 0;  // at the two crease-end corners
  double feasibility = 0;
  SolverReport report;
};

/// Projects max(0, x+y-1) on the [0,1]^2 grid with the given constraint step.
ChoneLemeurResult run_chone_lemeur(int cells, double eps, const SolverConfig& solver);

/// L2 projection (lumped-mass metric) of a nodal field onto the relaxed
/// convexity constraints of a grid/box mesh; shared machinery.
struct ProjectionResult {
  Eigen::VectorXd u;
  double feasibility = 0;
  size_t block_count = 0;
  SolverReport report;
};
ProjectionResult project_onto_convex(const SimplicialMesh& mesh, const Domain& domain,
                                     const Eigen::VectorXd& target, double eps,
                                     const SolverConfig& solver,
                                     double boundary_spacing = 0.0);

}  // namespace cvx
