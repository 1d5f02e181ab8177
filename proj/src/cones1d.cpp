#include "convexvar/cones1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvx {

Eigen::MatrixXd hinge_design_matrix(int n) {
  if (n < 2) throw std::invalid_argument("hinge_design_matrix: n >= 2");
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = static_cast<double>(i);
    for (int j = 1; j <= n - 1; ++j) X(i, j + 1) = std::max(0, i - j);
  }
  return X;
}

Eigen::VectorXd nnls_active_set(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                int free_count, std::vector<int>& warm) {
  const int nvar = static_cast<int>(A.cols());
  if (free_count < 0 || free_count > nvar)
    throw std::invalid_argument("nnls_active_set: bad free_count");

  std::vector<char> passive(nvar, 0);
  for (int j = 0; j < free_count; ++j) passive[j] = 1;
  for (int j : warm)
    if (j >= 0 && j < nvar) passive[j] = 1;

  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  const double tol_primal = 1e-12 * scale;
  const double tol_dual = 1e-10 * scale;

  auto ls_on_passive = [&](Eigen::VectorXd& x_out) {
    std::vector<int> cols;
    for (int j = 0; j < nvar; ++j)
      if (passive[j]) cols.push_back(j);
    x_out = Eigen::VectorXd::Zero(nvar);
    if (cols.empty()) return;
    Eigen::MatrixXd Ap(A.rows(), cols.size());
    for (size_t k = 0; k < cols.size(); ++k) Ap.col(k) = A.col(cols[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Ap);
    if (qr.rank() < static_cast<Eigen::Index>(cols.size()))
      throw std::runtime_error("nnls_active_set: rank-deficient passive set");
    Eigen::VectorXd xp = qr.solve(b);
    for (size_t k = 0; k < cols.size(); ++k) x_out[cols[k]] = xp[k];
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nvar);  // current feasible point
  Eigen::VectorXd cand;

  // clean a warm-started passive set: drop constrained variables that the
  // unconstrained fit wants negative
  for (int guard = 0; guard <= nvar; ++guard) {
    ls_on_passive(cand);
    int worst = -1;
    for (int j = free_count; j < nvar; ++j)
      if (passive[j] && cand[j] < -tol_primal) {
        worst = j;
        break;
      }
    if (worst < 0) {
      x = cand;
      break;
    }
    passive[worst] = 0;
  }

  const int max_iter = 6 * nvar + 60;
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::VectorXd grad = A.transpose() * (b - A * x);
    int enter = -1;
    for (int j = free_count; j < nvar; ++j) {
      if (!passive[j] && grad[j] > tol_dual * std::max(1.0, A.col(j).norm())) {
        enter = j;
        break;  // Bland: smallest index
      }
    }
    if (enter < 0) break;
    passive[enter] = 1;
    for (int inner = 0; inner <= nvar; ++inner) {
      ls_on_passive(cand);
      bool ok = true;
      for (int j = free_count; j < nvar; ++j)
        if (passive[j] && cand[j] < -tol_primal) ok = false;
      if (ok) {
        x = cand;
        break;
      }
      double alpha = 1.0;
      for (int j = free_count; j < nvar; ++j)
        if (passive[j] && cand[j] < -tol_primal)
          alpha = std::min(alpha, x[j] / std::max(x[j] - cand[j], 1e-300));
      alpha = std::max(alpha, 0.0);
      x += alpha * (cand - x);
      for (int j = free_count; j < nvar; ++j)
        if (passive[j] && x[j] <= tol_primal && cand[j] < -tol_primal) {
          passive[j] = 0;
          x[j] = 0.0;
        }
    }
  }

  warm.clear();
  for (int j = free_count; j < nvar; ++j)
    if (passive[j]) warm.push_back(j);
  return x;
}

// ---------------------------------------------------------------------------
// Projection onto H_1^n: active-set nonnegative least squares on the hinge
// coefficients. The fit on a given knot set is the least squares fit of f by
// a piecewise-linear function with those knots, solved in the hat basis
// (tridiagonal normal equations), so every active-set step costs O(n).
// ---------------------------------------------------------------------------

namespace {

// fit of f by a PL function with the given knots (hat-basis LS). The Gram
// entries over integer samples have closed forms in the gap length L.
void hat_fit(const std::vector<int>& K, const std::vector<double>& F0,
             const std::vector<double>& F1, const double* f, Hinge1DWorkspace& ws) {
  const int k = static_cast<int>(K.size());
  ws.diag.assign(k, 0.0);
  ws.off.assign(k, 0.0);
  ws.rhs.assign(k, 0.0);
  auto sum_f = [&](int a, int b) { return F0[b + 1] - F0[a]; };
  auto sum_if = [&](int a, int b) { return F1[b + 1] - F1[a]; };
  for (int s = 0; s + 1 < k; ++s) {
    const int a = K[s], b = K[s + 1];
    const double L = b - a;
    const double dd = (L + 1) * (2 * L + 1) / (6.0 * L);
    ws.diag[s] += dd;
    ws.diag[s + 1] += dd;
    ws.off[s] = (L * L - 1) / (6.0 * L);
    const double sf = sum_f(a, b), sif = sum_if(a, b);
    ws.rhs[s] += (b * sf - sif) / L;
    ws.rhs[s + 1] += (sif - a * sf) / L;
  }
  for (int s = 1; s + 1 < k; ++s) {  // interior knots double count one sample
    ws.diag[s] -= 1.0;
    ws.rhs[s] -= f[K[s]];
  }
  // Thomas solve
  ws.cp.assign(k, 0.0);
  ws.dp.assign(k, 0.0);
  ws.vk.assign(k, 0.0);
  ws.cp[0] = ws.off[0] / ws.diag[0];
  ws.dp[0] = ws.rhs[0] / ws.diag[0];
  for (int s = 1; s < k; ++s) {
    const double m = ws.diag[s] - ws.off[s - 1] * ws.cp[s - 1];
    ws.cp[s] = (s + 1 < k ? ws.off[s] : 0.0) / m;
    ws.dp[s] = (ws.rhs[s] - ws.off[s - 1] * ws.dp[s - 1]) / m;
  }
  ws.vk[k - 1] = ws.dp[k - 1];
  for (int s = k - 2; s >= 0; --s) ws.vk[s] = ws.dp[s] - ws.cp[s] * ws.vk[s + 1];
}

double fit_slope_change(const std::vector<int>& K, const std::vector<double>& v, int s) {
  const double sl = (v[s] - v[s - 1]) / (K[s] - K[s - 1]);
  const double sr = (v[s + 1] - v[s]) / (K[s + 1] - K[s]);
  return sr - sl;
}

void reconstruct_pl(const std::vector<int>& K, const std::vector<double>& v, double* g) {
  for (size_t s = 0; s + 1 < K.size(); ++s) {
    const int a = K[s], b = K[s + 1];
    const double va = v[s], slope = (v[s + 1] - v[s]) / (b - a);
    for (int i = a; i <= b; ++i) g[i] = va + slope * (i - a);
  }
}

}  // namespace

void project_uniform_convex_core(const double* f, int len, double* g, Hinge1DWorkspace& ws) {
  const int m = len;
  if (m < 3) throw std::invalid_argument("project_uniform_convex: need length >= 3");
  const int n = m - 1;

  double fmax = 0;
  for (int i = 0; i < m; ++i) fmax = std::max(fmax, std::abs(f[i]));
  const double scale = 1.0 + fmax;
  const double tol_c = 1e-12 * scale;
  const double tol_dual = 1e-10 * scale;

  ws.F0.resize(m + 1);
  ws.F1.resize(m + 1);
  ws.F0[0] = ws.F1[0] = 0.0;
  for (int i = 0; i < m; ++i) {
    ws.F0[i + 1] = ws.F0[i] + f[i];
    ws.F1[i + 1] = ws.F1[i] + static_cast<double>(i) * f[i];
  }

  // sanitize the carried-over knot set
  std::vector<int>& P = ws.knots;
  {
    size_t w = 0;
    int prev = 0;
    for (size_t r = 0; r < P.size(); ++r)
      if (P[r] > prev && P[r] <= n - 1) prev = P[w++] = P[r];
    P.resize(w);
  }

  std::vector<int>& K = ws.knot_buf;
  auto refit = [&]() {
    K.clear();
    K.push_back(0);
    K.insert(K.end(), P.begin(), P.end());
    K.push_back(n);
    hat_fit(K, ws.F0, ws.F1, f, ws);
  };

  // drop phase: make the warm-started fit hinge-feasible
  refit();
  for (int guard = 0; guard <= n; ++guard) {
    int drop = -1;
    for (size_t s = 1; s + 1 < K.size(); ++s)
      if (fit_slope_change(K, ws.vk, static_cast<int>(s)) < -tol_c) {
        drop = K[s];
        break;
      }
    if (drop < 0) break;
    P.erase(std::find(P.begin(), P.end(), drop));
    refit();
  }
  reconstruct_pl(K, ws.vk, g);

  const int max_outer = 4 * n + 40;
  for (int outer = 0; outer < max_outer; ++outer) {
    // dual scan for the smallest-index violated hinge: t_j = <hinge_j, f-g>
    double T1 = 0, T2 = 0;
    int enter = -1;
    int pp = static_cast<int>(P.size()) - 1;
    for (int i = n; i >= 1; --i) {
      T2 += T1;
      T1 += f[i] - g[i];
      if (i > n - 1) continue;
      while (pp >= 0 && P[pp] > i) --pp;
      if (pp >= 0 && P[pp] == i) continue;
      const double L = n - i;
      const double colnorm = std::sqrt(L * (L + 1) * (2 * L + 1) / 6.0);
      if (T2 > tol_dual * std::max(1.0, colnorm)) enter = i;  // ends smallest
    }
    if (enter < 0) break;

    P.insert(std::upper_bound(P.begin(), P.end(), enter), enter);
    for (int inner = 0; inner <= n; ++inner) {
      refit();
      bool feasible = true;
      for (size_t s = 1; s + 1 < K.size(); ++s)
        if (fit_slope_change(K, ws.vk, static_cast<int>(s)) < -tol_c) {
          feasible = false;
          break;
        }
      if (feasible) break;
      // step from the current iterate g toward the fit until a hinge
      // coefficient hits zero
      double alpha = 1.0;
      for (size_t s = 1; s + 1 < K.size(); ++s) {
        const double cc = fit_slope_change(K, ws.vk, static_cast<int>(s));
        if (cc < -tol_c) {
          const int a = K[s - 1], kk = K[s], b = K[s + 1];
          const double cur = (g[b] - g[kk]) / (b - kk) - (g[kk] - g[a]) / (kk - a);
          if (cur - cc > 1e-300) alpha = std::min(alpha, cur / (cur - cc));
        }
      }
      alpha = std::min(std::max(alpha, 0.0), 1.0);
      for (size_t s = 0; s < K.size(); ++s) {
        const double cur = g[K[s]];
        ws.vk[s] = cur + alpha * (ws.vk[s] - cur);
      }
      reconstruct_pl(K, ws.vk, g);
      // drop knots whose hinge coefficient collapsed
      size_t w = 0;
      for (size_t s = 1; s + 1 < K.size(); ++s)
        if (fit_slope_change(K, ws.vk, static_cast<int>(s)) > tol_c) P[w++] = K[s];
      P.resize(w);
    }
    reconstruct_pl(K, ws.vk, g);
  }
}

Eigen::VectorXd project_uniform_convex(const Eigen::VectorXd& f, Hinge1DWorkspace& ws) {
  Eigen::VectorXd g(f.size());
  project_uniform_convex_core(f.data(), static_cast<int>(f.size()), g.data(), ws);
  return g;
}

// ---------------------------------------------------------------------------
// Weighted cyclic cone: nonnegative least squares on the polar cone (the
// active constraints' multipliers), with an incrementally updated Cholesky
// factor of the active-row Gram matrix.
// ---------------------------------------------------------------------------

namespace {

struct CyclicRows {
  int n;
  double w;
  std::array<int, 3> idx(int i) const { return {(i + n - 1) % n, i, (i + 1) % n}; }
  double dot_row(int i, const double* x) const {
    auto id = idx(i);
    return -0.5 * x[id[0]] + w * x[id[1]] - 0.5 * x[id[2]];
  }
  void add_row(int i, double nu, double* x) const {
    auto id = idx(i);
    x[id[0]] += -0.5 * nu;
    x[id[1]] += w * nu;
    x[id[2]] += -0.5 * nu;
  }
  double gram(int i, int j) const {
    auto a = idx(i), b = idx(j);
    const double va[3] = {-0.5, w, -0.5}, vb[3] = {-0.5, w, -0.5};
    double s = 0;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        if (a[p] == b[q]) s += va[p] * vb[q];
    return s;
  }
};

}  // namespace

void project_weighted_cyclic_core(const double* f, int len, double w, double* g,
                                  CyclicWorkspace& ws) {
  const int n = len;
  if (n < 4) throw std::invalid_argument("project_weighted_cyclic: need length >= 4");
  if (!(w > 0.0) || w > 1.0) throw std::invalid_argument("project_weighted_cyclic: 0 < w <= 1");

  CyclicRows rows{n, w};
  double fmax = 0;
  for (int i = 0; i < n; ++i) fmax = std::max(fmax, std::abs(f[i]));
  const double scale = 1.0 + fmax;
  const double tol_p = 1e-11 * scale;
  const double tol_nu = 1e-12 * scale;

  if (ws.weight != w || static_cast<int>(ws.in_active.size()) != n) {
    ws.active.clear();
    ws.nu.clear();
    ws.chol.resize(0, 0);
    ws.in_active.assign(n, 0);
    ws.weight = w;
  }

  auto& A = ws.active;
  auto& nu = ws.nu;
  Eigen::MatrixXd& L = ws.chol;

  auto chol_append = [&](int row) -> bool {
    const int k = static_cast<int>(A.size());
    auto& wv = ws.rhs;
    wv.assign(k, 0.0);
    for (int s = 0; s < k; ++s) {
      double acc = rows.gram(A[s], row);
      for (int t = 0; t < s; ++t) acc -= L(s, t) * wv[t];
      wv[s] = acc / L(s, s);
    }
    double d = rows.gram(row, row);
    for (int s = 0; s < k; ++s) d -= wv[s] * wv[s];
    if (d < 1e-10 * rows.gram(row, row)) return false;  // dependent row
    if (L.rows() < k + 1) {
      Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(std::max(2 * k + 2, 8), std::max(2 * k + 2, 8));
      grown.topLeftCorner(L.rows(), L.cols()) = L;
      L.swap(grown);
    }
    for (int t = 0; t < k; ++t) L(k, t) = wv[t];
    L(k, k) = std::sqrt(d);
    return true;
  };

  // expects `A` to still contain the entry at `pos`; refactors the trailing
  // block of the factor from the Gram
  auto chol_remove = [&](int pos) {
    const int k = static_cast<int>(A.size());
    for (int s = pos; s + 1 < k; ++s) {
      const int rs = A[s + 1];
      for (int t = 0; t < s; ++t) {
        const int rt = A[t < pos ? t : t + 1];
        double acc = rows.gram(rt, rs);
        for (int u = 0; u < t; ++u) acc -= L(t, u) * L(s, u);
        L(s, t) = acc / L(t, t);
      }
      double d = rows.gram(rs, rs);
      for (int u = 0; u < s; ++u) d -= L(s, u) * L(s, u);
      L(s, s) = std::sqrt(std::max(d, 1e-300));
    }
  };

  auto solve_nu = [&](std::vector<double>& out) {
    const int k = static_cast<int>(A.size());
    out.assign(k, 0.0);
    if (k == 0) return;
    for (int s = 0; s < k; ++s) {
      double acc = rows.dot_row(A[s], f);
      for (int t = 0; t < s; ++t) acc -= L(s, t) * out[t];
      out[s] = acc / L(s, s);
    }
    for (int s = k - 1; s >= 0; --s) {
      double acc = out[s];
      for (int t = s + 1; t < k; ++t) acc -= L(t, s) * out[t];
      out[s] = acc / L(s, s);
    }
  };

  // rebuild the factor if the workspace was moved in from elsewhere
  if (!A.empty() && L.rows() < static_cast<Eigen::Index>(A.size())) {
    std::vector<int> saved = A;
    A.clear();
    L.resize(0, 0);
    std::fill(ws.in_active.begin(), ws.in_active.end(), 0);
    for (int r : saved)
      if (chol_append(r)) {
        A.push_back(r);
        ws.in_active[r] = 1;
      }
    nu.assign(A.size(), 0.0);
  }
  if (nu.size() != A.size()) nu.assign(A.size(), 0.0);

  auto recompute_g = [&]() {
    for (int i = 0; i < n; ++i) g[i] = f[i];
    for (size_t s = 0; s < A.size(); ++s) rows.add_row(A[s], -nu[s], g);
  };

  auto& cand = ws.cand;
  auto restore_feasible = [&]() {
    for (int guard = 0; guard <= n; ++guard) {
      solve_nu(cand);
      bool ok = true;
      for (size_t s = 0; s < A.size(); ++s)
        if (cand[s] < -tol_nu) ok = false;
      if (ok) {
        nu = cand;
        return;
      }
      double alpha = 1.0;
      for (size_t s = 0; s < A.size(); ++s)
        if (cand[s] < -tol_nu && nu[s] - cand[s] > 1e-300)
          alpha = std::min(alpha, nu[s] / (nu[s] - cand[s]));
      alpha = std::min(std::max(alpha, 0.0), 1.0);
      for (size_t s = 0; s < A.size(); ++s) nu[s] += alpha * (cand[s] - nu[s]);
      for (int s = static_cast<int>(A.size()) - 1; s >= 0; --s)
        if (nu[s] <= tol_nu && cand[s] < -tol_nu) {
          chol_remove(s);
          ws.in_active[A[s]] = 0;
          A.erase(A.begin() + s);
          nu.erase(nu.begin() + s);
        }
    }
  };

  restore_feasible();
  recompute_g();

  const int max_outer = 6 * n + 60;
  for (int outer = 0; outer < max_outer; ++outer) {
    int enter = -1;
    for (int i = 0; i < n; ++i)
      if (!ws.in_active[i] && rows.dot_row(i, g) > tol_p) {
        enter = i;
        break;  // Bland
      }
    if (enter < 0) break;
    if (!chol_append(enter)) {
      // dependent constraint: rank-revealing dense fallback
      std::vector<int> all = A;
      all.push_back(enter);
      Eigen::MatrixXd At = Eigen::MatrixXd::Zero(n, all.size());
      for (size_t s = 0; s < all.size(); ++s) rows.add_row(all[s], 1.0, At.col(s).data());
      Eigen::VectorXd fv = Eigen::Map<const Eigen::VectorXd>(f, n);
      Eigen::VectorXd sol = At.colPivHouseholderQr().solve(fv);
      bool ok = true;
      for (Eigen::Index s = 0; s < sol.size(); ++s)
        if (sol[s] < -1e-9 * scale) ok = false;
      if (ok) {
        Eigen::Map<Eigen::VectorXd>(g, n) = fv - At * sol;
        A = all;
        nu.assign(sol.data(), sol.data() + sol.size());
        std::fill(ws.in_active.begin(), ws.in_active.end(), 0);
        for (int r : A) ws.in_active[r] = 1;
        L.resize(0, 0);  // rebuilt on the next call
      }
      break;
    }
    A.push_back(enter);
    ws.in_active[enter] = 1;
    nu.push_back(0.0);
    restore_feasible();
    recompute_g();
  }
}

Eigen::VectorXd project_weighted_cyclic(const Eigen::VectorXd& f, double w,
                                        CyclicWorkspace& ws) {
  Eigen::VectorXd g(f.size());
  project_weighted_cyclic_core(f.data(), static_cast<int>(f.size()), w, g.data(), ws);
  return g;
}

double projection_kkt_residual(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                               const ConeSpec& cone) {
  const double scale = 1.0 + f.cwiseAbs().maxCoeff();
  const Eigen::VectorXd r = f - g;
  double worst = 0.0;
  if (cone.kind == ConeSpec::Kind::UniformConvex1D) {
    const int n = static_cast<int>(f.size()) - 1;
    for (int i = 1; i <= n - 1; ++i)
      worst = std::max(worst, (2 * g[i] - g[i - 1] - g[i + 1]) / scale);
    double s0 = 0, s1 = 0;
    for (int i = 0; i <= n; ++i) {
      s0 += r[i];
      s1 += i * r[i];
    }
    worst = std::max(worst, std::abs(s0) / (scale * (n + 1)));
    worst = std::max(worst, std::abs(s1) / (scale * (n + 1) * (n + 1)));
    // multipliers mu_j = -<hinge_j, r> must be nonnegative, complementary
    double T1 = 0, T2 = 0;
    for (int i = n; i >= 1; --i) {
      T2 += T1;
      T1 += r[i];
      if (i > n - 1) continue;
      const double L = n - i;
      const double colnorm = std::sqrt(L * (L + 1) * (2 * L + 1) / 6.0);
      worst = std::max(worst, T2 / (scale * std::max(1.0, colnorm)));
      const double mu = -T2;
      const double cval = 2 * g[i] - g[i - 1] - g[i + 1];
      worst = std::max(worst, std::abs(mu * cval) / (scale * scale * std::max(1.0, colnorm)));
    }
  } else {
    const int n = static_cast<int>(f.size());
    CyclicRows rows{n, cone.weight};
    for (int i = 0; i < n; ++i) worst = std::max(worst, rows.dot_row(i, g.data()) / scale);
    Eigen::MatrixXd At = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) rows.add_row(i, 1.0, At.col(i).data());
    Eigen::VectorXd mu = At.colPivHouseholderQr().solve(r);
    worst = std::max(worst, (At * mu - r).cwiseAbs().maxCoeff() / scale);
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, -mu[i] / scale);
      worst = std::max(worst, std::abs(mu[i] * rows.dot_row(i, g.data())) / (scale * scale));
    }
  }
  return worst;
}

}  // namespace cvx
