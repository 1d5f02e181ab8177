#include "convexvar/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cvx {

ProxTerm ProxTerm::scaled_l2(Eigen::VectorXd target, Eigen::VectorXd weights) {
  if (target.size() != weights.size()) throw std::invalid_argument("scaled_l2: size mismatch");
  if (weights.minCoeff() < 0) throw std::invalid_argument("scaled_l2: weights >= 0");
  ProxTerm t;
  t.kind = Kind::ScaledL2;
  t.target = std::move(target);
  t.weights = std::move(weights);
  return t;
}

ProxTerm ProxTerm::l1(Eigen::VectorXd target, Eigen::VectorXd weights) {
  if (target.size() != weights.size()) throw std::invalid_argument("l1: size mismatch");
  if (weights.minCoeff() < 0) throw std::invalid_argument("l1: weights >= 0");
  ProxTerm t;
  t.kind = Kind::L1;
  t.target = std::move(target);
  t.weights = std::move(weights);
  return t;
}

ProxTerm ProxTerm::linf(Eigen::VectorXd target) {
  ProxTerm t;
  t.kind = Kind::LInf;
  t.target = std::move(target);
  return t;
}

ProxTerm ProxTerm::linear(Eigen::VectorXd c) {
  ProxTerm t;
  t.kind = Kind::Linear;
  t.linear_c = std::move(c);
  return t;
}

ProxTerm ProxTerm::quadratic(Eigen::SparseMatrix<double> H, Eigen::VectorXd b, double constant) {
  if (H.rows() != H.cols() || H.rows() != b.size())
    throw std::invalid_argument("quadratic: size mismatch");
  ProxTerm t;
  t.kind = Kind::QuadraticForm;
  t.H = std::move(H);
  t.b = std::move(b);
  t.constant = constant;
  return t;
}

ProxTerm ProxTerm::indicator(Cone cone) {
  ProxTerm t;
  t.kind = Kind::Indicator;
  t.cone = std::move(cone);
  return t;
}

double ProxTerm::value(const Eigen::VectorXd& y) const {
  switch (kind) {
    case Kind::ScaledL2: {
      double v = 0;
      for (Eigen::Index i = 0; i < y.size(); ++i)
        v += weights[i] * (y[i] - target[i]) * (y[i] - target[i]);
      return v;
    }
    case Kind::L1: {
      double v = 0;
      for (Eigen::Index i = 0; i < y.size(); ++i) v += weights[i] * std::abs(y[i] - target[i]);
      return v;
    }
    case Kind::LInf:
      return (y - target).cwiseAbs().maxCoeff();
    case Kind::Linear:
      return linear_c.dot(y);
    case Kind::QuadraticForm:
      return 0.5 * y.dot(H * y) + b.dot(y) + constant;
    case Kind::Indicator:
      return 0.0;
  }
  return 0.0;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& u, double radius) {
  if (radius < 0) throw std::invalid_argument("project_l1_ball: radius >= 0");
  if (u.cwiseAbs().sum() <= radius) return u;
  // sort-based threshold
  std::vector<double> a(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) a[i] = std::abs(u[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  double cum = 0, theta = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    cum += a[k];
    const double t = (cum - radius) / static_cast<double>(k + 1);
    if (k + 1 == a.size() || a[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double m = std::max(std::abs(u[i]) - theta, 0.0);
    out[i] = u[i] >= 0 ? m : -m;
  }
  return out;
}

Eigen::VectorXd prox_pair_sum(const Cone& cone, const Eigen::VectorXd& y) {
  if (cone.kind != ConeKind::PairSumEquality)
    throw std::invalid_argument("prox_pair_sum: wrong cone kind");
  Eigen::VectorXd out = y;
  const int n = cone.n;
  if (cone.alpha_free) {
    double mean = 0;
    for (int i = 0; i < n; ++i) mean += y[i] + y[cone.pairing[i]];
    mean /= n;
    for (int i = 0; i < n; ++i) {
      const int j = cone.pairing[i];
      if (j < i) continue;
      const double shift = 0.5 * (mean - y[i] - y[j]);
      out[i] += shift;
      out[j] += shift;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const int j = cone.pairing[i];
      if (j < i) continue;
      const double shift = 0.5 * (cone.alpha - y[i] - y[j]);
      out[i] += shift;
      out[j] += shift;
    }
  }
  return out;
}

void prox_inplace(const ProxTerm& term, double gamma, const Eigen::Ref<const Eigen::VectorXd>& y,
                  Eigen::Ref<Eigen::VectorXd> out, ProxContext& ctx) {
  if (!(gamma > 0)) throw std::invalid_argument("prox: gamma > 0");
  switch (term.kind) {
    case ProxTerm::Kind::ScaledL2: {
      const double ig = 1.0 / gamma;
      for (Eigen::Index i = 0; i < y.size(); ++i)
        out[i] = (term.weights[i] * term.target[i] + ig * y[i]) / (term.weights[i] + ig);
      return;
    }
    case ProxTerm::Kind::L1: {
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double tau = 0.5 * gamma * term.weights[i];
        const double u = y[i] - term.target[i];
        const double m = std::max(std::abs(u) - tau, 0.0);
        out[i] = term.target[i] + (u >= 0 ? m : -m);
      }
      return;
    }
    case ProxTerm::Kind::LInf: {
      const Eigen::VectorXd u = y - term.target;
      out = term.target + u - project_l1_ball(u, 0.5 * gamma);
      return;
    }
    case ProxTerm::Kind::Linear:
      out = y - (0.5 * gamma) * term.linear_c;
      return;
    case ProxTerm::Kind::QuadraticForm: {
      if (!ctx.quad_factor || ctx.quad_gamma != gamma) {
        Eigen::SparseMatrix<double> M = term.H;
        const double d = 2.0 / gamma;
        Eigen::SparseMatrix<double> I(M.rows(), M.cols());
        I.setIdentity();
        M += d * I;
        ctx.quad_factor =
            std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(M);
        if (ctx.quad_factor->info() != Eigen::Success)
          throw std::runtime_error("prox(QuadraticForm): factorization failed");
        ctx.quad_gamma = gamma;
      }
      out = ctx.quad_factor->solve((2.0 / gamma) * y - term.b);
      return;
    }
    case ProxTerm::Kind::Indicator:
      switch (term.cone.kind) {
        case ConeKind::UniformConvex1D:
          project_uniform_convex_core(y.data(), static_cast<int>(y.size()), out.data(),
                                      ctx.hinge);
          return;
        case ConeKind::WeightedCyclicConvex1D:
          project_weighted_cyclic_core(y.data(), static_cast<int>(y.size()), term.cone.weight,
                                       out.data(), ctx.cyclic);
          return;
        case ConeKind::PairSumEquality:
          out = prox_pair_sum(term.cone, y);
          return;
        case ConeKind::Box:
          for (Eigen::Index i = 0; i < y.size(); ++i)
            out[i] = std::min(std::max(y[i], term.cone.lower[i]), term.cone.upper[i]);
          return;
        case ConeKind::LowerBound:
          for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = std::max(y[i], term.cone.lower[i]);
          return;
        case ConeKind::Point:
          out = term.cone.lower;
          return;
      }
      return;
  }
}

Eigen::VectorXd prox(const ProxTerm& term, double gamma, const Eigen::VectorXd& y) {
  ProxContext ctx;
  Eigen::VectorXd out(y.size());
  prox_inplace(term, gamma, y, out, ctx);
  return out;
}

QuadratureTable assemble_quadrature(const SimplicialMesh& mesh) {
  QuadratureTable q;
  const int d = mesh.dim;
  const int ns = mesh.simplex_count();
  q.simplex_volume.resize(ns);
  q.grad.resize(ns);
  q.lumped_mass = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int s = 0; s < ns; ++s) {
    const double vol = mesh.simplex_volume(s);
    if (!(vol > 0)) throw std::runtime_error("assemble_quadrature: degenerate simplex");
    q.simplex_volume[s] = vol;
    const auto& sx = mesh.simplices[s];
    Eigen::MatrixXd E(d, d);
    for (int k = 0; k < d; ++k)
      E.row(k) = (mesh.vertices[sx[k + 1]] - mesh.vertices[sx[0]]).head(d).transpose();
    Eigen::MatrixXd Einv = E.inverse();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d, d + 1);
    for (int k = 0; k < d; ++k) {
      G.col(k + 1) += Einv.col(k);
      G.col(0) -= Einv.col(k);
    }
    q.grad[s] = G;
    for (int k = 0; k <= d; ++k) q.lumped_mass[sx[k]] += vol / (d + 1);
  }
  return q;
}

namespace {

// exact degree-2 quadrature of |x|^2 over a simplex
double integral_sq_norm(const SimplicialMesh& mesh, int s) {
  const auto& sx = mesh.simplices[s];
  const double vol = mesh.simplex_volume(s);
  if (mesh.dim == 2) {
    // edge midpoint rule, exact for quadratics
    double acc = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const Vec3 m = 0.5 * (mesh.vertices[sx[a]] + mesh.vertices[sx[b]]);
        acc += m.squaredNorm();
      }
    return vol * acc / 3.0;
  }
  // 4-point degree-2 rule on the tetrahedron
  const double alpha = 0.5854101966249685, beta = 0.1381966011250105;
  double acc = 0;
  for (int c = 0; c < 4; ++c) {
    Vec3 p = Vec3::Zero();
    for (int k = 0; k < 4; ++k) p += (k == c ? alpha : beta) * mesh.vertices[sx[k]];
    acc += p.squaredNorm();
  }
  return vol * acc / 4.0;
}

}  // namespace

GeometricPa assemble_geometric_pa(const SimplicialMesh& mesh,
                                  const std::function<double(const Vec3&)>& rho,
                                  const std::vector<Vec3>& K) {
  const int d = mesh.dim;
  const int n = mesh.vertex_count();
  QuadratureTable q = assemble_quadrature(mesh);

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  double constant = 0;
  for (int s = 0; s < mesh.simplex_count(); ++s) {
    const auto& sx = mesh.simplices[s];
    Vec3 centroid = Vec3::Zero();
    for (int k = 0; k <= d; ++k) centroid += mesh.vertices[sx[k]];
    centroid /= (d + 1);
    const double rs = rho(centroid);
    if (rs < 0) throw std::invalid_argument("assemble_geometric_pa: rho >= 0");
    const double vol = q.simplex_volume[s] * rs;
    const Eigen::MatrixXd& G = q.grad[s];
    // 1/2 int |grad v|^2: stiffness
    Eigen::MatrixXd Ke = vol * (G.transpose() * G);
    for (int a = 0; a <= d; ++a)
      for (int bb = 0; bb <= d; ++bb)
        if (Ke(a, bb) != 0.0) trips.emplace_back(sx[a], sx[bb], Ke(a, bb));
    // int v: lumped;  -int <grad v, x>: midpoint rule
    for (int a = 0; a <= d; ++a) {
      b[sx[a]] += vol / (d + 1);
      b[sx[a]] -= vol * G.col(a).dot(centroid.head(d));
    }
    constant += 0.5 * rs * integral_sq_norm(mesh, s);
  }
  Eigen::SparseMatrix<double> H(n, n);
  H.setFromTriplets(trips.begin(), trips.end());

  GeometricPa out;
  out.objective = ProxTerm::quadratic(std::move(H), std::move(b), constant);
  out.lower_bound = build_lower_bound_block(mesh, [&K](const Vec3& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& y : K) best = std::max(best, x.dot(y) - 0.5 * y.squaredNorm());
    return best;
  });
  return out;
}

LinearPa assemble_linear_pa(const SimplicialMesh& mesh) {
  if (mesh.dim != 2) throw std::invalid_argument("assemble_linear_pa: d = 2 required");
  const int n = mesh.vertex_count();
  QuadratureTable q = assemble_quadrature(mesh);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < mesh.simplex_count(); ++s) {
    const auto& sx = mesh.simplices[s];
    Vec3 centroid = (mesh.vertices[sx[0]] + mesh.vertices[sx[1]] + mesh.vertices[sx[2]]) / 3.0;
    const double vol = q.simplex_volume[s];
    for (int a = 0; a <= 2; ++a) {
      c[sx[a]] += vol / 3.0;                                   // int u
      c[sx[a]] -= vol * q.grad[s].col(a).dot(centroid.head(2));  // -int <grad u, x>
    }
  }
  LinearPa out;
  out.objective = ProxTerm::linear(std::move(c));
  Eigen::Vector2d lo(0.0, 0.0), hi(1.0, 1.0);
  out.gradient_box = build_gradient_box_blocks(mesh, lo, hi);
  return out;
}

}  // namespace cvx
