#pragma once

#include "convexvar/mesh.hpp"

namespace cvx {

struct EnvelopeResult {
  Eigen::VectorXd values;  // convex envelope at the mesh vertices
  double max_gap = 0.0;    // max_i (g_i - envelope_i)
  int witness = -1;        // vertex attaining the gap
};

/// Convex envelope of a nodal field: lower convex hull of the lifted vertex
/// set, evaluated back at every vertex. Supported for fields on 2D meshes.
EnvelopeResult convex_envelope(const NodalField& field);

/// 1D variant on an ordered sequence of abscissas (used for tests and for
/// profiles): lower hull of (x_i, g_i).
Eigen::VectorXd envelope_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& g);

/// Lipschitz constant of a piecewise-linear field: max per-simplex gradient
/// norm (exact).
double lipschitz_constant(const NodalField& field);

/// Global minimizer of a strictly convex QP
///   min 1/2 x'Hx + c'x  s.t.  Ain x <= bin, Aeq x = beq
/// by exhaustive enumeration of inequality active sets (independent ground
/// truth; at most 20 inequality rows).
Eigen::VectorXd qp_oracle(const Eigen::MatrixXd& H, const Eigen::VectorXd& c,
                          const Eigen::MatrixXd& Ain, const Eigen::VectorXd& bin,
                          const Eigen::MatrixXd& Aeq, const Eigen::VectorXd& beq);

/// Radial reduction of the geometric principal-agent functional on the unit
/// disk: minimizes sum_i 2 pi m_i h [ v_weight (v_i+v_{i+1})/2
/// + 1/2 ((v_{i+1}-v_i)/h - m_i)^2 ] over convex nondecreasing nonnegative
/// profiles (KKT-verified active-set solve in slope space).
struct RadialProfile {
  Eigen::VectorXd r;  // grid radii, 0..1
  Eigen::VectorXd v;  // optimal profile values
  double objective = 0.0;
  double kkt_residual = 0.0;
  double value_at(double radius) const;  // linear interpolation
};
RadialProfile radial_pa_oracle(int n, double v_weight = 1.0);

}  // namespace cvx
