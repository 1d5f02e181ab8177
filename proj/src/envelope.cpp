#include "convexvar/envelope.hpp"

#include "convexvar/hull.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvx {

Eigen::VectorXd envelope_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
  const int n = static_cast<int>(x.size());
  if (g.size() != n || n < 2) throw std::invalid_argument("envelope_1d: size mismatch");
  // lower hull by monotone chain over (x, g); x must be increasing
  std::vector<int> hull;
  auto cross = [&](int o, int a, int b) {
    return (x[a] - x[o]) * (g[b] - g[o]) - (g[a] - g[o]) * (x[b] - x[o]);
  };
  for (int i = 0; i < n; ++i) {
    if (i > 0 && x[i] <= x[i - 1])
      throw std::invalid_argument("envelope_1d: abscissas must increase");
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull[hull.size() - 1], i) <= 0)
      hull.pop_back();
    hull.push_back(i);
  }
  Eigen::VectorXd env(n);
  size_t seg = 0;
  for (int i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && x[hull[seg + 1]] < x[i]) ++seg;
    if (seg + 1 >= hull.size()) {
      env[i] = g[hull.back()];
      continue;
    }
    const int a = hull[seg], b = hull[seg + 1];
    const double t = (x[i] - x[a]) / (x[b] - x[a]);
    env[i] = g[a] + t * (g[b] - g[a]);
  }
  return env;
}

EnvelopeResult convex_envelope(const NodalField& field) {
  if (!field.mesh) throw std::invalid_argument("convex_envelope: field needs a mesh");
  const SimplicialMesh& mesh = *field.mesh;
  if (mesh.dim != 2)
    throw std::invalid_argument("convex_envelope: supported for 2D meshes");
  const int n = mesh.vertex_count();
  if (field.values.size() != n) throw std::invalid_argument("convex_envelope: size mismatch");

  std::vector<Eigen::Vector3d> lifted(n);
  for (int i = 0; i < n; ++i)
    lifted[i] = Eigen::Vector3d(mesh.vertices[i].x(), mesh.vertices[i].y(), field.values[i]);

  EnvelopeResult out;
  out.values.resize(n);

  std::vector<std::array<int, 3>> faces;
  bool degenerate = false;
  try {
    faces = convex_hull_3d(lifted);
  } catch (const std::runtime_error&) {
    degenerate = true;  // all lifted points coplanar: envelope is the affine fit
  }
  if (!degenerate) {
    // lower faces only; a convex piecewise-linear function is the max of its
    // supporting planes
    struct Plane {
      double gx, gy, c;
    };
    std::vector<Plane> planes;
    for (const auto& f : faces) {
      const Eigen::Vector3d a = lifted[f[0]], b = lifted[f[1]], c = lifted[f[2]];
      Eigen::Vector3d nrm = (b - a).cross(c - a);
      if (nrm.z() >= -1e-12 * nrm.norm()) continue;  // not a lower face
      // z(x, y) = (n.a - nx x - ny y)/nz
      planes.push_back({-nrm.x() / nrm.z(), -nrm.y() / nrm.z(), nrm.dot(a) / nrm.z()});
    }
    degenerate = planes.empty();
    if (!degenerate) {
      for (int i = 0; i < n; ++i) {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& p : planes)
          v = std::max(v, p.gx * lifted[i].x() + p.gy * lifted[i].y() + p.c);
        out.values[i] = std::min(v, field.values[i]);  // clip hull roundoff
      }
    }
  }
  if (degenerate) {
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      A(i, 0) = lifted[i].x();
      A(i, 1) = lifted[i].y();
      A(i, 2) = 1.0;
      b[i] = field.values[i];
    }
    Eigen::Vector3d p = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    for (int i = 0; i < n; ++i) out.values[i] = A.row(i).head<3>().dot(p);
  }

  out.max_gap = 0;
  out.witness = 0;
  for (int i = 0; i < n; ++i) {
    const double gap = field.values[i] - out.values[i];
    if (gap > out.max_gap) {
      out.max_gap = gap;
      out.witness = i;
    }
  }
  return out;
}

double lipschitz_constant(const NodalField& field) {
  if (!field.mesh) throw std::invalid_argument("lipschitz_constant: field needs a mesh");
  const SimplicialMesh& mesh = *field.mesh;
  double lip = 0;
  for (int s = 0; s < mesh.simplex_count(); ++s) {
    const auto& sx = mesh.simplices[s];
    if (mesh.dim == 2) {
      Eigen::Matrix2d E;
      Eigen::Vector2d d;
      for (int k = 0; k < 2; ++k) {
        const Vec3 e = mesh.vertices[sx[k + 1]] - mesh.vertices[sx[0]];
        E.row(k) << e.x(), e.y();
        d[k] = field.values[sx[k + 1]] - field.values[sx[0]];
      }
      lip = std::max(lip, (E.inverse() * d).norm());
    } else {
      Eigen::Matrix3d E;
      Eigen::Vector3d d;
      for (int k = 0; k < 3; ++k) {
        E.row(k) = (mesh.vertices[sx[k + 1]] - mesh.vertices[sx[0]]).transpose();
        d[k] = field.values[sx[k + 1]] - field.values[sx[0]];
      }
      lip = std::max(lip, (E.inverse() * d).norm());
    }
  }
  return lip;
}

Eigen::VectorXd qp_oracle(const Eigen::MatrixXd& H, const Eigen::VectorXd& c,
                          const Eigen::MatrixXd& Ain, const Eigen::VectorXd& bin,
                          const Eigen::MatrixXd& Aeq, const Eigen::VectorXd& beq) {
  const int nvar = static_cast<int>(H.rows());
  const int m = static_cast<int>(Ain.rows());
  const int me = static_cast<int>(Aeq.rows());
  if (m > 20) throw std::invalid_argument("qp_oracle: at most 20 inequality rows");

  const double scale = 1.0 + bin.size() ? (1.0 + bin.cwiseAbs().maxCoeff()) : 1.0;
  const double tol = 1e-9 * scale;

  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;
  bool found = false;

  for (uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) act.push_back(i);
    const int na = static_cast<int>(act.size());
    Eigen::MatrixXd K(nvar + na + me, nvar + na + me);
    K.setZero();
    K.topLeftCorner(nvar, nvar) = H;
    for (int i = 0; i < na; ++i) {
      K.block(nvar + i, 0, 1, nvar) = Ain.row(act[i]);
      K.block(0, nvar + i, nvar, 1) = Ain.row(act[i]).transpose();
    }
    for (int i = 0; i < me; ++i) {
      K.block(nvar + na + i, 0, 1, nvar) = Aeq.row(i);
      K.block(0, nvar + na + i, nvar, 1) = Aeq.row(i).transpose();
    }
    Eigen::VectorXd rhs(nvar + na + me);
    rhs.head(nvar) = -c;
    for (int i = 0; i < na; ++i) rhs[nvar + i] = bin[act[i]];
    for (int i = 0; i < me; ++i) rhs[nvar + na + i] = beq[i];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(nvar);
    bool ok = true;
    for (int i = 0; i < na && ok; ++i)
      if (-sol[nvar + i] < -tol) ok = false;  // multiplier sign (lambda >= 0)
    for (int i = 0; i < m && ok; ++i)
      if (Ain.row(i).dot(x) > bin[i] + tol) ok = false;
    if (!ok) continue;
    const double obj = 0.5 * x.dot(H * x) + c.dot(x);
    if (obj < best_obj - 1e-12) {
      best_obj = obj;
      best = x;
      found = true;
    } else if (!found) {
      best_obj = obj;
      best = x;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("qp_oracle: no feasible active set");
  return best;
}

namespace {

// weighted isotonic regression (nondecreasing) by pool-adjacent-violators
Eigen::VectorXd pava_nondecreasing(const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  const int n = static_cast<int>(u.size());
  std::vector<double> mean(n), weight(n);
  std::vector<int> count(n);
  int top = 0;
  for (int i = 0; i < n; ++i) {
    mean[top] = u[i];
    weight[top] = w[i];
    count[top] = 1;
    ++top;
    while (top >= 2 && mean[top - 2] >= mean[top - 1]) {
      const double tw = weight[top - 2] + weight[top - 1];
      mean[top - 2] = (mean[top - 2] * weight[top - 2] + mean[top - 1] * weight[top - 1]) / tw;
      weight[top - 2] = tw;
      count[top - 2] += count[top - 1];
      --top;
    }
  }
  Eigen::VectorXd out(n);
  int pos = 0;
  for (int b = 0; b < top; ++b)
    for (int k = 0; k < count[b]; ++k) out[pos++] = mean[b];
  return out;
}

}  // namespace

double RadialProfile::value_at(double radius) const {
  const int n = static_cast<int>(r.size()) - 1;
  const double h = r[1] - r[0];
  double t = std::clamp(radius, r[0], r[n]);
  int i = std::min(static_cast<int>((t - r[0]) / h), n - 1);
  const double a = (t - r[i]) / h;
  return v[i] * (1 - a) + v[i + 1] * a;
}

RadialProfile radial_pa_oracle(int n, double v_weight) {
  if (n < 10) throw std::invalid_argument("radial_pa_oracle: n >= 10");
  const double h = 1.0 / n;
  Eigen::VectorXd m(n), cwt(n), u(n), d(n);
  for (int i = 0; i < n; ++i) {
    m[i] = (i + 0.5) * h;
    cwt[i] = 2.0 * M_PI * m[i] * h;
  }
  // linear coefficient of slope t_j collected from the v-terms
  double tail = 0;
  for (int j = n - 1; j >= 0; --j) {
    d[j] = v_weight * h * (cwt[j] / 2.0 + tail);
    tail += cwt[j];
  }
  for (int i = 0; i < n; ++i) u[i] = m[i] - d[i] / cwt[i];

  // optimal slopes: weighted isotonic fit, clamped at zero (convex radial
  // profile, nonnegative slope); v_0 = 0 since its coefficient is positive
  Eigen::VectorXd t = pava_nondecreasing(u, cwt).cwiseMax(0.0);

  RadialProfile out;
  out.r.resize(n + 1);
  out.v.resize(n + 1);
  out.v[0] = 0;
  for (int i = 0; i <= n; ++i) out.r[i] = i * h;
  for (int i = 0; i < n; ++i) out.v[i + 1] = out.v[i] + h * t[i];

  out.objective = 0;
  for (int i = 0; i < n; ++i)
    out.objective +=
        cwt[i] * (v_weight * 0.5 * (out.v[i] + out.v[i + 1]) + 0.5 * (t[i] - m[i]) * (t[i] - m[i]));

  // KKT in slope space: mu_j = sum_{i >= j} c_i (t_i - u_i) are the
  // multipliers of the monotonicity constraints
  double res = 0;
  double mu = 0;
  for (int j = n - 1; j >= 1; --j) {
    mu += cwt[j] * (t[j] - u[j]);
    res = std::max(res, -mu);                            // dual feasibility
    res = std::max(res, std::abs(mu * (t[j] - t[j - 1])));  // complementarity
    res = std::max(res, t[j - 1] - t[j]);                // primal
  }
  mu += cwt[0] * (t[0] - u[0]);
  res = std::max(res, -mu);
  res = std::max(res, std::abs(mu * t[0]));
  res = std::max(res, -t[0]);
  out.kkt_residual = res;
  if (res > 1e-9 * (1.0 + u.cwiseAbs().maxCoeff()))
    throw std::runtime_error("radial_pa_oracle: KKT verification failed");
  return out;
}

}  // namespace cvx
