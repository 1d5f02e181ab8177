#pragma once

#include "convexvar/mesh.hpp"
#include "convexvar/sphere.hpp"

#include <optional>

namespace cvx {

enum class ConeKind {
  UniformConvex1D,
  WeightedCyclicConvex1D,
  PairSumEquality,
  Box,
  LowerBound,
  Point,
};

const char* cone_tag(ConeKind kind);

/// Convex set attached to the rows of a constraint block.
struct Cone {
  ConeKind kind = ConeKind::UniformConvex1D;
  int n = 0;                 // number of rows
  double weight = 1.0;       // cyclic cone weight, 0 < w <= 1
  std::vector<int> pairing;  // PairSumEquality: fixed-point-free involution
  bool alpha_free = true;
  double alpha = 0.0;
  Eigen::VectorXd lower, upper;  // Box bounds / LowerBound psi / Point target

  static Cone uniform_convex(int n);
  static Cone weighted_cyclic(int n, double w);
  static Cone pair_sum(std::vector<int> pairing, std::optional<double> alpha);
  static Cone box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Cone lower_bound(Eigen::VectorXd psi);
  static Cone point(Eigen::VectorXd target);
};

/// Row-stack operator acting on nodal coefficients. Segment operators keep
/// the evaluation implicit (points on a line, located on demand) so that
/// large constraint families need no per-row storage.
struct BlockOp {
  enum class Kind { Identity, Rows, Segment };
  Kind kind = Kind::Identity;
  int dim = 0;                 // identity size (coefficient count)
  std::vector<EvalRow> rows;   // Kind::Rows
  const SimplicialMesh* mesh = nullptr;  // Kind::Segment
  Vec3 origin = Vec3::Zero(), dir = Vec3::Zero();  // unit direction
  double step = 0.0;
  int npts = 0;

  static BlockOp identity(int n);
  static BlockOp from_rows(std::vector<EvalRow> rows);
  static BlockOp segment(const SimplicialMesh& mesh, const Vec3& origin, const Vec3& dir,
                         double step, int npts);

  int nrows() const;
  void apply(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> out) const;
  void add_adjoint(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::VectorXd& accum) const;
  EvalRow materialize_row(int i) const;
};

/// One summand of the splitting: rows L_i paired with a cone.
struct ConstraintBlock {
  BlockOp op;
  Cone cone;
};

struct ConstraintViolationReport {
  Eigen::VectorXd per_block;  // positive part of the worst violation per block
  double global_max = 0.0;
  int worst_block = -1;
  // largest signed constraint value over the inequality-type rows
  double max_signed = -std::numeric_limits<double>::infinity();
};

/// Points p + eps*i*(q-p)/|q-p| for 0 <= i <= |q-p|/eps.
std::vector<Vec3> discrete_segment(const Vec3& p, const Vec3& q, double eps);

/// Convexity gap of a collinear triple: g(z) - lambda g(x) - (1-lambda) g(y)
/// with lambda = |zy|/|xy|. Nonpositive iff the triple is convex-consistent.
double ell_xyz(double gx, double gy, double gz, const Vec3& x, const Vec3& y, const Vec3& z);

/// One block per unordered pair of boundary samples whose discrete segment
/// keeps >= 3 in-domain points; rows evaluate the field at the segment
/// points, cone = UniformConvex1D. Marginally-outside points are snapped,
/// farther points truncate the segment.
std::vector<ConstraintBlock> build_convexity_blocks(const SimplicialMesh& mesh,
                                                    const std::vector<Vec3>& boundary_samples,
                                                    double eps);

/// One block per great circle; rows evaluate the spherical field at the
/// circle points, cone = WeightedCyclicConvex1D with w = cos(eps).
std::vector<ConstraintBlock> build_spherical_blocks(const SphereMesh& sphere,
                                                    const std::vector<GreatCircleSample>& circles);

/// Pair-sum equality over all antipodal pairs; alpha = nullopt leaves the
/// common width value free.
ConstraintBlock build_width_block(const SphereMesh& sphere, std::optional<double> alpha);

/// One Box block per simplex; rows are the per-simplex gradient components.
std::vector<ConstraintBlock> build_gradient_box_blocks(const SimplicialMesh& mesh,
                                                       const Eigen::VectorXd& lower,
                                                       const Eigen::VectorXd& upper);

/// LowerBound block with identity rows and psi sampled at the vertices.
ConstraintBlock build_lower_bound_block(const SimplicialMesh& mesh,
                                        const std::function<double(const Vec3&)>& psi);

ConstraintViolationReport verify_feasibility(const Eigen::VectorXd& coeffs,
                                             const std::vector<ConstraintBlock>& blocks,
                                             double tol = 0.0);

/// Sparse triplet text format: `block_id cone_tag row col weight`.
void write_blocks_text(const std::vector<ConstraintBlock>& blocks, const std::string& path);

}  // namespace cvx
