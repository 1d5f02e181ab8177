#include "convexvar/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace cvx {

const char* cone_tag(ConeKind kind) {
  switch (kind) {
    case ConeKind::UniformConvex1D: return "uniform";
    case ConeKind::WeightedCyclicConvex1D: return "cyclic";
    case ConeKind::PairSumEquality: return "pairsum";
    case ConeKind::Box: return "box";
    case ConeKind::LowerBound: return "lower";
    case ConeKind::Point: return "point";
  }
  return "?";
}

Cone Cone::uniform_convex(int n) {
  if (n < 3) throw std::invalid_argument("Cone::uniform_convex: n >= 3 rows");
  Cone c;
  c.kind = ConeKind::UniformConvex1D;
  c.n = n;
  return c;
}

Cone Cone::weighted_cyclic(int n, double w) {
  if (n < 4) throw std::invalid_argument("Cone::weighted_cyclic: n >= 4 rows");
  if (!(w > 0) || w > 1) throw std::invalid_argument("Cone::weighted_cyclic: 0 < w <= 1");
  Cone c;
  c.kind = ConeKind::WeightedCyclicConvex1D;
  c.n = n;
  c.weight = w;
  return c;
}

Cone Cone::pair_sum(std::vector<int> pairing, std::optional<double> alpha) {
  const int n = static_cast<int>(pairing.size());
  for (int i = 0; i < n; ++i) {
    if (pairing[i] < 0 || pairing[i] >= n || pairing[i] == i || pairing[pairing[i]] != i)
      throw std::invalid_argument("Cone::pair_sum: pairing must be a fixed-point-free involution");
  }
  Cone c;
  c.kind = ConeKind::PairSumEquality;
  c.n = n;
  c.pairing = std::move(pairing);
  c.alpha_free = !alpha.has_value();
  c.alpha = alpha.value_or(0.0);
  return c;
}

Cone Cone::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("Cone::box: size mismatch");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw std::invalid_argument("Cone::box: lower <= upper");
  Cone c;
  c.kind = ConeKind::Box;
  c.n = static_cast<int>(lo.size());
  c.lower = std::move(lo);
  c.upper = std::move(hi);
  return c;
}

Cone Cone::lower_bound(Eigen::VectorXd psi) {
  Cone c;
  c.kind = ConeKind::LowerBound;
  c.n = static_cast<int>(psi.size());
  c.lower = std::move(psi);
  return c;
}

Cone Cone::point(Eigen::VectorXd target) {
  Cone c;
  c.kind = ConeKind::Point;
  c.n = static_cast<int>(target.size());
  c.lower = std::move(target);
  return c;
}

BlockOp BlockOp::identity(int n) {
  BlockOp op;
  op.kind = Kind::Identity;
  op.dim = n;
  return op;
}

BlockOp BlockOp::from_rows(std::vector<EvalRow> rows) {
  BlockOp op;
  op.kind = Kind::Rows;
  op.rows = std::move(rows);
  return op;
}

BlockOp BlockOp::segment(const SimplicialMesh& mesh, const Vec3& origin, const Vec3& dir,
                         double step, int npts) {
  BlockOp op;
  op.kind = Kind::Segment;
  op.mesh = &mesh;
  op.origin = origin;
  op.dir = dir;
  op.step = step;
  op.npts = npts;
  return op;
}

int BlockOp::nrows() const {
  switch (kind) {
    case Kind::Identity: return dim;
    case Kind::Rows: return static_cast<int>(rows.size());
    case Kind::Segment: return npts;
  }
  return 0;
}

void BlockOp::apply(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> out) const {
  switch (kind) {
    case Kind::Identity:
      out = x;
      return;
    case Kind::Rows:
      for (size_t r = 0; r < rows.size(); ++r) out[r] = rows[r].apply(x);
      return;
    case Kind::Segment:
      for (int j = 0; j < npts; ++j) {
        const auto loc = mesh->locate(origin + (step * j) * dir);
        if (loc.simplex < 0) throw std::domain_error("BlockOp: segment point left the mesh");
        double v = 0;
        for (int k = 0; k <= mesh->dim; ++k) v += loc.w[k] * x[loc.idx[k]];
        out[j] = v;
      }
      return;
  }
}

void BlockOp::add_adjoint(const Eigen::Ref<const Eigen::VectorXd>& v,
                          Eigen::VectorXd& accum) const {
  switch (kind) {
    case Kind::Identity:
      accum += v;
      return;
    case Kind::Rows:
      for (size_t r = 0; r < rows.size(); ++r)
        for (size_t k = 0; k < rows[r].idx.size(); ++k)
          accum[rows[r].idx[k]] += rows[r].w[k] * v[r];
      return;
    case Kind::Segment:
      for (int j = 0; j < npts; ++j) {
        const auto loc = mesh->locate(origin + (step * j) * dir);
        if (loc.simplex < 0) throw std::domain_error("BlockOp: segment point left the mesh");
        for (int k = 0; k <= mesh->dim; ++k) accum[loc.idx[k]] += loc.w[k] * v[j];
      }
      return;
  }
}

EvalRow BlockOp::materialize_row(int i) const {
  switch (kind) {
    case Kind::Identity: {
      EvalRow r;
      r.idx = {i};
      r.w = {1.0};
      return r;
    }
    case Kind::Rows:
      return rows[i];
    case Kind::Segment: {
      const auto loc = mesh->locate(origin + (step * i) * dir);
      if (loc.simplex < 0) throw std::domain_error("BlockOp: segment point left the mesh");
      EvalRow r;
      for (int k = 0; k <= mesh->dim; ++k) {
        r.idx.push_back(loc.idx[k]);
        r.w.push_back(loc.w[k]);
      }
      return r;
    }
  }
  return {};
}

std::vector<Vec3> discrete_segment(const Vec3& p, const Vec3& q, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("discrete_segment: eps > 0");
  const double len = (q - p).norm();
  if (!(len > 0)) throw std::invalid_argument("discrete_segment: p != q");
  const Vec3 dir = (q - p) / len;
  const int last = static_cast<int>(std::floor(len / eps + 1e-12));
  std::vector<Vec3> pts;
  pts.reserve(last + 1);
  for (int i = 0; i <= last; ++i) pts.push_back(p + (eps * i) * dir);
  return pts;
}

double ell_xyz(double gx, double gy, double gz, const Vec3& x, const Vec3& y, const Vec3& z) {
  const double xy = (x - y).norm();
  if (!(xy > 0)) throw std::invalid_argument("ell_xyz: x != y");
  const double lambda = (z - y).norm() / xy;
  // z must lie on [x, y]
  const Vec3 recon = lambda * x + (1.0 - lambda) * y;
  if ((recon - z).norm() > 1e-9 * std::max(1.0, xy))
    throw std::invalid_argument("ell_xyz: z off the segment [x, y]");
  return gz - lambda * gx - (1.0 - lambda) * gy;
}

std::vector<ConstraintBlock> build_convexity_blocks(const SimplicialMesh& mesh,
                                                    const std::vector<Vec3>& boundary_samples,
                                                    double eps) {
  if (!(eps > 0)) throw std::invalid_argument("build_convexity_blocks: eps > 0");
  if (boundary_samples.size() < 2)
    throw std::invalid_argument("build_convexity_blocks: need >= 2 boundary samples");
  std::vector<ConstraintBlock> blocks;
  const int m = static_cast<int>(boundary_samples.size());
  const double snap = 1e-6 * mesh.domain_diameter();
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const Vec3 &p = boundary_samples[a], &q = boundary_samples[b];
      const double len = (q - p).norm();
      if (!(len > 0)) continue;
      const int last = static_cast<int>(std::floor(len / eps + 1e-12));
      if (last < 2) continue;  // fewer than 3 points
      const Vec3 dir = (q - p) / len;
      // truncate end points that fall outside the mesh (curved boundaries)
      int i0 = 0, i1 = last;
      while (i0 <= i1 && mesh.locate(p + (eps * i0) * dir, snap).simplex < 0) ++i0;
      while (i1 >= i0 && mesh.locate(p + (eps * i1) * dir, snap).simplex < 0) --i1;
      const int count = i1 - i0 + 1;
      if (count < 3) continue;
      ConstraintBlock blk;
      if (mesh.grid) {
        blk.op = BlockOp::segment(mesh, p + (eps * i0) * dir, dir, eps, count);
      } else {
        std::vector<EvalRow> rows;
        rows.reserve(count);
        for (int i = i0; i <= i1; ++i) rows.push_back(interpolation_row(mesh, p + (eps * i) * dir));
        blk.op = BlockOp::from_rows(std::move(rows));
      }
      blk.cone = Cone::uniform_convex(count);
      blocks.push_back(std::move(blk));
    }
  return blocks;
}

std::vector<ConstraintBlock> build_spherical_blocks(
    const SphereMesh& sphere, const std::vector<GreatCircleSample>& circles) {
  std::vector<ConstraintBlock> blocks;
  blocks.reserve(circles.size());
  for (const auto& c : circles) {
    ConstraintBlock blk;
    std::vector<EvalRow> rows;
    rows.reserve(c.points.size());
    for (const auto& pt : c.points) rows.push_back(sphere.interpolation_row(pt));
    blk.op = BlockOp::from_rows(std::move(rows));
    blk.cone = Cone::weighted_cyclic(static_cast<int>(c.points.size()), c.weight);
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

ConstraintBlock build_width_block(const SphereMesh& sphere, std::optional<double> alpha) {
  for (int i = 0; i < sphere.count(); ++i)
    if (sphere.antipode[i] < 0 || sphere.antipode[sphere.antipode[i]] != i)
      throw std::invalid_argument("build_width_block: sphere lacks an antipode involution");
  ConstraintBlock blk;
  blk.op = BlockOp::identity(sphere.count());
  blk.cone = Cone::pair_sum(sphere.antipode, alpha);
  return blk;
}

std::vector<ConstraintBlock> build_gradient_box_blocks(const SimplicialMesh& mesh,
                                                       const Eigen::VectorXd& lower,
                                                       const Eigen::VectorXd& upper) {
  const int d = mesh.dim;
  if (lower.size() != d || upper.size() != d)
    throw std::invalid_argument("build_gradient_box_blocks: bounds must have length d");
  for (int k = 0; k < d; ++k)
    if (lower[k] > upper[k]) throw std::invalid_argument("build_gradient_box_blocks: lo <= hi");

  std::vector<ConstraintBlock> blocks;
  blocks.reserve(mesh.simplex_count());
  for (int s = 0; s < mesh.simplex_count(); ++s) {
    const auto& sx = mesh.simplices[s];
    // gradient of the nodal basis: solve E g = delta(values)
    Eigen::MatrixXd E(d, d);
    for (int k = 0; k < d; ++k)
      E.row(k) = (mesh.vertices[sx[k + 1]] - mesh.vertices[sx[0]]).head(d).transpose();
    Eigen::MatrixXd Einv = E.inverse();
    if (!Einv.allFinite())
      throw std::runtime_error("build_gradient_box_blocks: degenerate simplex");
    std::vector<EvalRow> rows(d);
    for (int comp = 0; comp < d; ++comp) {
      EvalRow& r = rows[comp];
      r.idx.assign(sx.begin(), sx.begin() + d + 1);
      r.w.assign(d + 1, 0.0);
      for (int k = 0; k < d; ++k) {
        // value difference (v_{k+1} - v_0) contributes Einv(comp, k)
        r.w[k + 1] += Einv(comp, k);
        r.w[0] -= Einv(comp, k);
      }
    }
    ConstraintBlock blk;
    blk.op = BlockOp::from_rows(std::move(rows));
    Eigen::VectorXd lo(d), hi(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = lower[k];
      hi[k] = upper[k];
    }
    blk.cone = Cone::box(lo, hi);
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

ConstraintBlock build_lower_bound_block(const SimplicialMesh& mesh,
                                        const std::function<double(const Vec3&)>& psi) {
  Eigen::VectorXd p(mesh.vertex_count());
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    p[i] = psi(mesh.vertices[i]);
    if (!std::isfinite(p[i]))
      throw std::invalid_argument("build_lower_bound_block: psi must be finite at vertices");
  }
  ConstraintBlock blk;
  blk.op = BlockOp::identity(mesh.vertex_count());
  blk.cone = Cone::lower_bound(std::move(p));
  return blk;
}

ConstraintViolationReport verify_feasibility(const Eigen::VectorXd& coeffs,
                                             const std::vector<ConstraintBlock>& blocks,
                                             double tol) {
  ConstraintViolationReport rep;
  rep.per_block.resize(static_cast<Eigen::Index>(blocks.size()));
  Eigen::VectorXd vals;
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& blk = blocks[bi];
    const int n = blk.op.nrows();
    vals.resize(n);
    blk.op.apply(coeffs, vals);
    double worst = 0;
    switch (blk.cone.kind) {
      case ConeKind::UniformConvex1D:
        for (int i = 1; i + 1 < n; ++i) {
          const double ell = vals[i] - 0.5 * (vals[i - 1] + vals[i + 1]);
          rep.max_signed = std::max(rep.max_signed, ell);
          worst = std::max(worst, ell);
        }
        break;
      case ConeKind::WeightedCyclicConvex1D:
        for (int i = 0; i < n; ++i) {
          const double ell = blk.cone.weight * vals[i] -
                             0.5 * (vals[(i + n - 1) % n] + vals[(i + 1) % n]);
          rep.max_signed = std::max(rep.max_signed, ell);
          worst = std::max(worst, ell);
        }
        break;
      case ConeKind::PairSumEquality: {
        if (blk.cone.alpha_free) {
          double mean = 0;
          for (int i = 0; i < n; ++i) mean += vals[i] + vals[blk.cone.pairing[i]];
          mean /= n;  // every pair counted twice, as is the denominator
          for (int i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(vals[i] + vals[blk.cone.pairing[i]] - mean));
        } else {
          for (int i = 0; i < n; ++i)
            worst = std::max(worst,
                             std::abs(vals[i] + vals[blk.cone.pairing[i]] - blk.cone.alpha));
        }
        break;
      }
      case ConeKind::Box:
        for (int i = 0; i < n; ++i)
          worst = std::max({worst, blk.cone.lower[i] - vals[i], vals[i] - blk.cone.upper[i]});
        break;
      case ConeKind::LowerBound:
        for (int i = 0; i < n; ++i) worst = std::max(worst, blk.cone.lower[i] - vals[i]);
        break;
      case ConeKind::Point:
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(vals[i] - blk.cone.lower[i]));
        break;
    }
    rep.per_block[bi] = std::max(0.0, worst - tol);
    if (worst > rep.global_max) {
      rep.global_max = worst;
      rep.worst_block = static_cast<int>(bi);
    }
  }
  return rep;
}

void write_blocks_text(const std::vector<ConstraintBlock>& blocks, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  os << "# block_id cone_tag row col weight\n";
  for (size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& blk = blocks[bi];
    for (int r = 0; r < blk.op.nrows(); ++r) {
      const EvalRow row = blk.op.materialize_row(r);
      for (size_t k = 0; k < row.idx.size(); ++k)
        os << bi << " " << cone_tag(blk.cone.kind) << " " << r << " " << row.idx[k] << " "
           << row.w[k] << "\n";
    }
  }
}

}  // namespace cvx
