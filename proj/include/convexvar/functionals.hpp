#pragma once

#include "convexvar/cones1d.hpp"
#include "convexvar/constraints.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>

namespace cvx {

/// Proximable objective term. The prox convention is
///   prox_gamma f(y) = argmin_x f(x) + (1/gamma)|x - y|^2.
struct ProxTerm {
  enum class Kind { ScaledL2, L1, LInf, Linear, QuadraticForm, Indicator };
  Kind kind = Kind::Indicator;

  Eigen::VectorXd target;   // ScaledL2 / L1 / LInf reference point
  Eigen::VectorXd weights;  // ScaledL2: pointwise weights; L1: pointwise scale
  Eigen::VectorXd linear_c;
  Eigen::SparseMatrix<double> H;  // QuadraticForm: f = 1/2 x'Hx + b'x + constant
  Eigen::VectorXd b;
  double constant = 0.0;
  Cone cone;  // Indicator

  static ProxTerm scaled_l2(Eigen::VectorXd target, Eigen::VectorXd weights);
  static ProxTerm l1(Eigen::VectorXd target, Eigen::VectorXd weights);
  static ProxTerm linf(Eigen::VectorXd target);
  static ProxTerm linear(Eigen::VectorXd c);
  static ProxTerm quadratic(Eigen::SparseMatrix<double> H, Eigen::VectorXd b,
                            double constant = 0.0);
  static ProxTerm indicator(Cone cone);

  /// Objective value at y (indicators contribute 0).
  double value(const Eigen::VectorXd& y) const;
};

/// Mutable per-term state: projection warm starts and cached factorizations.
struct ProxContext {
  Hinge1DWorkspace hinge;
  CyclicWorkspace cyclic;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> quad_factor;
  double quad_gamma = -1.0;
};

/// No allocations on the warm path; `y` and `out` must not alias.
void prox_inplace(const ProxTerm& term, double gamma, const Eigen::Ref<const Eigen::VectorXd>& y,
                  Eigen::Ref<Eigen::VectorXd> out, ProxContext& ctx);
Eigen::VectorXd prox(const ProxTerm& term, double gamma, const Eigen::VectorXd& y);

/// Projection onto the pair-sum equality set (alpha fixed or free).
Eigen::VectorXd prox_pair_sum(const Cone& pair_cone, const Eigen::VectorXd& y);

/// Projection onto the l1 ball of the given radius (used by the LInf prox).
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& u, double radius);

/// FEM backing data for the variational functionals: exact per-simplex
/// constant gradients and vertex-lumped masses.
struct QuadratureTable {
  Eigen::VectorXd simplex_volume;
  std::vector<Eigen::MatrixXd> grad;  // per simplex, d x (d+1)
  Eigen::VectorXd lumped_mass;
};

QuadratureTable assemble_quadrature(const SimplicialMesh& mesh);

/// Assembled geometric principal-agent functional
///   L(v) = int [v + 1/2 |grad v - x|^2] rho dx
/// as 1/2 xi'H xi + b'xi + constant, plus the lower-bound block from K.
struct GeometricPa {
  ProxTerm objective;           // QuadraticForm
  ConstraintBlock lower_bound;  // v >= max_{y in K} <., y> - 1/2 |y|^2
};
GeometricPa assemble_geometric_pa(const SimplicialMesh& mesh,
                                  const std::function<double(const Vec3&)>& rho,
                                  const std::vector<Vec3>& K);

/// Assembled linear principal-agent functional M(u) = int (u - <grad u, x>) dx
/// over [0,1]^2 plus the gradient box blocks.
struct LinearPa {
  ProxTerm objective;  // Linear
  std::vector<ConstraintBlock> gradient_box;
};
LinearPa assemble_linear_pa(const SimplicialMesh& mesh);

}  // namespace cvx
