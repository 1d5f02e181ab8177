#pragma once

#include "convexvar/functionals.hpp"

#include <functional>

namespace cvx {

/// min over coefficients of  sum_i g_i(L_i x); every block pairs a row-stack
/// operator with an easily proximable term. Q = sum_i L_i' L_i must be
/// invertible (an identity-operator data block guarantees it).
struct SdmmBlock {
  BlockOp op;
  ProxTerm term;
};

struct SdmmProblem {
  int dim = 0;
  std::vector<SdmmBlock> blocks;
};

struct SolverConfig {
  double gamma = 1.0;
  int max_iterations = 10000;
  double primal_residual_tol = 1e-7;
  int log_every = 100;
  bool parallel = true;
  int threads = 0;  // 0: hardware default
};

struct TracePoint {
  int iteration;
  double residual;
  double objective;
};

struct SolverReport {
  int iterations = 0;
  double final_residual = 0.0;
  double final_objective = 0.0;
  std::vector<TracePoint> trace;
  double wall_seconds = 0.0;
  void write_trace_csv(const std::string& path) const;
};

using ProgressCallback = std::function<void(int iteration, double residual, double objective)>;

/// Factorized normal matrix Q = sum_i L_i' L_i (exposed for tests).
Eigen::SparseMatrix<double> assemble_normal_matrix(const SdmmProblem& problem);

/// Runs the simultaneous-direction method of multipliers:
///   x_n   = Q^{-1} sum_i L_i'(y_i - z_i)
///   y_i   <- prox_gamma g_i(L_i x_n + z_i)
///   z_i   <- z_i + L_i x_n - y_i
/// starting from (y_i, z_i) = (L_i x0, 0); stops at max_iterations or when
/// max_i |L_i x - y_i|_inf <= tol. Deterministic for any thread count.
std::pair<Eigen::VectorXd, SolverReport> sdmm_solve(const SdmmProblem& problem,
                                                    const SolverConfig& config,
                                                    const Eigen::VectorXd& x0,
                                                    const ProgressCallback& callback = {});

}  // namespace cvx
