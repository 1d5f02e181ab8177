#pragma once

#include <Eigen/Dense>

#include <vector>

namespace cvx {

/// Cone of discrete convex sequences or its weighted cyclic analogue.
struct ConeSpec {
  enum class Kind { UniformConvex1D, WeightedCyclicConvex1D };
  Kind kind = Kind::UniformConvex1D;
  int length = 0;       // number of samples
  double weight = 1.0;  // cyclic only, 0 < w <= 1
};

/// Warm-startable state for the projection onto H_1^n: the set of hinge
/// knots carried over between proximal computations.
struct Hinge1DWorkspace {
  std::vector<int> knots;  // strictly increasing, subset of {1..n-1}
  // scratch reused across calls (no allocation on the warm path)
  std::vector<double> rhs, diag, off, vk, F0, F1, cp, dp;
  std::vector<int> knot_buf;
};

/// Warm-startable state for the weighted cyclic cone projection: ordered
/// active set with an incrementally updated Cholesky factor of the
/// active-row Gram matrix.
struct CyclicWorkspace {
  std::vector<int> active;          // insertion-ordered constraint indices
  Eigen::MatrixXd chol;             // lower factor over `active`
  std::vector<double> nu;           // multipliers for `active`
  std::vector<char> in_active;
  double weight = -1.0;             // invalidates the factor if w changes
  std::vector<double> cand, rhs;    // scratch
};

/// Design matrix of the hinge parameterization of H_1^n:
/// columns [all-ones, ramp i, (i-j)_+ for j = 1..n-1], size (n+1)x(n+1).
Eigen::MatrixXd hinge_design_matrix(int n);

/// Exact nonnegative least squares min |Ax-b| with x_j >= 0 for
/// j >= free_count, by the active-set method with Bland's smallest-index
/// rule. `warm` seeds and returns the passive (unclamped) set.
Eigen::VectorXd nnls_active_set(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                int free_count, std::vector<int>& warm);

/// Euclidean projection of f (length n+1) onto
///   H_1^n = { g : 2 g_i <= g_{i-1} + g_{i+1}, 1 <= i <= n-1 }.
/// Exact active-set solve on the hinge parameterization; the workspace
/// carries the active set between calls. The in-place core allocates
/// nothing on a warm call (f and g may not alias).
void project_uniform_convex_core(const double* f, int len, double* g, Hinge1DWorkspace& ws);
Eigen::VectorXd project_uniform_convex(const Eigen::VectorXd& f, Hinge1DWorkspace& ws);

/// Euclidean projection of f (length n) onto the weighted cyclic cone
///   { g : w g_i <= (g_{i-1} + g_{i+1})/2 cyclically }.
void project_weighted_cyclic_core(const double* f, int len, double w, double* g,
                                  CyclicWorkspace& ws);
Eigen::VectorXd project_weighted_cyclic(const Eigen::VectorXd& f, double w,
                                        CyclicWorkspace& ws);

/// Max KKT residual of a claimed projection (primal violation, dual
/// infeasibility, complementarity, residual-cone orthogonality). Test aid.
double projection_kkt_residual(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                               const ConeSpec& cone);

}  // namespace cvx
