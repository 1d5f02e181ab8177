#include "convexvar/sdmm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#ifdef CONVEXVAR_HAS_OPENMP
#include <omp.h>
#endif

namespace cvx {

namespace {

constexpr int kChunks = 64;  // fixed partition: deterministic reductions

// per-point location cache for segment operators (index + weights)
struct SegCache {
  std::vector<int> idx;     // 4 per point
  std::vector<double> wgt;  // 4 per point
};

void gather_segment(const BlockOp& op, const Eigen::VectorXd& x, double* out, SegCache& cache) {
  const SimplicialMesh& mesh = *op.mesh;
  const int d = mesh.dim;
  cache.idx.resize(4 * op.npts);
  cache.wgt.resize(4 * op.npts);
  for (int j = 0; j < op.npts; ++j) {
    const auto loc = mesh.locate(op.origin + (op.step * j) * op.dir);
    if (loc.simplex < 0) throw std::domain_error("sdmm: segment point left the mesh");
    double v = 0;
    for (int k = 0; k <= d; ++k) {
      cache.idx[4 * j + k] = loc.idx[k];
      cache.wgt[4 * j + k] = loc.w[k];
      v += loc.w[k] * x[loc.idx[k]];
    }
    for (int k = d + 1; k < 4; ++k) cache.idx[4 * j + k] = -1;
    out[j] = v;
  }
}

}  // namespace

Eigen::SparseMatrix<double> assemble_normal_matrix(const SdmmProblem& problem) {
  const int n = problem.dim;
  std::vector<Eigen::Triplet<double>> trips;
  bool has_segment = false;
  const SimplicialMesh* seg_mesh = nullptr;
  for (const auto& blk : problem.blocks) {
    switch (blk.op.kind) {
      case BlockOp::Kind::Identity:
        for (int i = 0; i < n; ++i) trips.emplace_back(i, i, 1.0);
        break;
      case BlockOp::Kind::Rows:
        for (const auto& row : blk.op.rows)
          for (size_t a = 0; a < row.idx.size(); ++a)
            for (size_t b = 0; b < row.idx.size(); ++b)
              trips.emplace_back(row.idx[a], row.idx[b], row.w[a] * row.w[b]);
        break;
      case BlockOp::Kind::Segment:
        has_segment = true;
        seg_mesh = blk.op.mesh;
        break;
    }
  }
  if (has_segment) {
    // pattern: vertex pairs sharing a simplex (values streamed below)
    for (const auto& sx : seg_mesh->simplices)
      for (int a = 0; a <= seg_mesh->dim; ++a)
        for (int b = 0; b <= seg_mesh->dim; ++b) trips.emplace_back(sx[a], sx[b], 0.0);
  }
  Eigen::SparseMatrix<double> Q(n, n);
  Q.setFromTriplets(trips.begin(), trips.end());
  if (has_segment) {
    for (const auto& blk : problem.blocks) {
      if (blk.op.kind != BlockOp::Kind::Segment) continue;
      const SimplicialMesh& mesh = *blk.op.mesh;
      for (int j = 0; j < blk.op.npts; ++j) {
        const auto loc = mesh.locate(blk.op.origin + (blk.op.step * j) * blk.op.dir);
        if (loc.simplex < 0)
          throw std::domain_error("assemble_normal_matrix: segment point left the mesh");
        for (int a = 0; a <= mesh.dim; ++a)
          for (int b = 0; b <= mesh.dim; ++b)
            Q.coeffRef(loc.idx[a], loc.idx[b]) += loc.w[a] * loc.w[b];
      }
    }
  }
  Q.makeCompressed();
  return Q;
}

void SolverReport::write_trace_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "iteration,residual,objective\n";
  os.precision(12);
  for (const auto& t : trace)
    os << t.iteration << "," << t.residual << "," << t.objective << "\n";
}

std::pair<Eigen::VectorXd, SolverReport> sdmm_solve(const SdmmProblem& problem,
                                                    const SolverConfig& config,
                                                    const Eigen::VectorXd& x0,
                                                    const ProgressCallback& callback) {
  if (problem.blocks.empty()) throw std::invalid_argument("sdmm_solve: no blocks");
  if (x0.size() != problem.dim) throw std::invalid_argument("sdmm_solve: bad x0 size");
  if (!(config.gamma > 0) || config.max_iterations < 1)
    throw std::invalid_argument("sdmm_solve: bad config");
  const auto t_start = std::chrono::steady_clock::now();

  const int n = problem.dim;
  const int m = static_cast<int>(problem.blocks.size());

  Eigen::SparseMatrix<double> Q = assemble_normal_matrix(problem);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(Q);
  if (factor.info() != Eigen::Success)
    throw std::runtime_error("sdmm_solve: factorization of Q failed");
  {
    const Eigen::VectorXd D = factor.vectorD();
    const double dmax = D.cwiseAbs().maxCoeff();
    if (D.cwiseAbs().minCoeff() < 1e-12 * dmax)
      throw std::runtime_error(
          "sdmm_solve: Q numerically singular; add an identity-operator data block");
  }

  // per-block offsets into the stacked (y, z) storage
  std::vector<int> offset(m + 1, 0);
  for (int i = 0; i < m; ++i) offset[i + 1] = offset[i] + problem.blocks[i].op.nrows();
  const long total_rows = offset[m];
  Eigen::VectorXd y(total_rows), z = Eigen::VectorXd::Zero(total_rows), s(total_rows);

  std::vector<ProxContext> ctx(m);

  // fixed chunking balanced by row counts (independent of the thread count)
  std::vector<int> chunk_begin;
  {
    const long per = std::max<long>(1, (total_rows + kChunks - 1) / kChunks);
    chunk_begin.push_back(0);
    long acc = 0;
    for (int i = 0; i < m; ++i) {
      acc += problem.blocks[i].op.nrows();
      if (acc >= per && i + 1 < m) {
        chunk_begin.push_back(i + 1);
        acc = 0;
      }
    }
    chunk_begin.push_back(m);
  }
  const int nchunks = static_cast<int>(chunk_begin.size()) - 1;
  std::vector<Eigen::VectorXd> chunk_acc(nchunks, Eigen::VectorXd::Zero(n));
  std::vector<double> chunk_res(nchunks, 0.0), chunk_obj(nchunks, 0.0);
  std::vector<Eigen::VectorXd> chunk_tbuf(nchunks);
  std::vector<SegCache> seg_cache(m);

  Eigen::VectorXd x = x0;
  for (int i = 0; i < m; ++i) {
    auto seg = y.segment(offset[i], problem.blocks[i].op.nrows());
    problem.blocks[i].op.apply(x, seg);
  }

#ifdef CONVEXVAR_HAS_OPENMP
  const int nthreads = config.parallel
                           ? (config.threads > 0 ? config.threads : omp_get_max_threads())
                           : 1;
#endif

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const auto yi = y.segment(offset[i], problem.blocks[i].op.nrows());
    problem.blocks[i].op.add_adjoint(yi, acc);  // z = 0 initially
  }

  SolverReport report;
  int iter = 0;
  double residual = std::numeric_limits<double>::infinity();
  double objective = 0;

  for (iter = 1; iter <= config.max_iterations; ++iter) {
    x = factor.solve(acc);
    if (!x.allFinite())
      throw std::runtime_error("sdmm_solve: non-finite iterate at iteration " +
                               std::to_string(iter));
    const bool sample = (iter % std::max(config.log_every, 1) == 0) || iter == 1;

    auto process_chunk = [&](int c) {
      chunk_acc[c].setZero();
      double res = 0, obj = 0;
      Eigen::VectorXd& tbuf = chunk_tbuf[c];
      for (int i = chunk_begin[c]; i < chunk_begin[c + 1]; ++i) {
        const auto& blk = problem.blocks[i];
        const int ni = blk.op.nrows();
        double* sp = s.data() + offset[i];
        double* yp = y.data() + offset[i];
        double* zp = z.data() + offset[i];
        if (blk.op.kind == BlockOp::Kind::Segment) {
          gather_segment(blk.op, x, sp, seg_cache[i]);
        } else {
          Eigen::Map<Eigen::VectorXd> sv(sp, ni);
          blk.op.apply(x, sv);
        }
        if (tbuf.size() < ni) tbuf.resize(ni);
        for (int r = 0; r < ni; ++r) tbuf[r] = sp[r] + zp[r];
        Eigen::Map<Eigen::VectorXd> yv(yp, ni), zv(zp, ni), sv(sp, ni);
        prox_inplace(blk.term, config.gamma, tbuf.head(ni), yv, ctx[i]);
        for (int r = 0; r < ni; ++r) {
          zp[r] = tbuf[r] - yp[r];
          res = std::max(res, std::abs(sp[r] - yp[r]));
        }
        if (sample && blk.term.kind != ProxTerm::Kind::Indicator) obj += blk.term.value(sv);
        // adjoint accumulation for the next x-update: L_i' (y - z)
        if (blk.op.kind == BlockOp::Kind::Segment) {
          const auto& cache = seg_cache[i];
          for (int r = 0; r < ni; ++r) {
            const double w = yp[r] - zp[r];
            for (int k = 0; k < 4; ++k) {
              const int id = cache.idx[4 * r + k];
              if (id >= 0) chunk_acc[c][id] += cache.wgt[4 * r + k] * w;
            }
          }
        } else {
          for (int r = 0; r < ni; ++r) tbuf[r] = yp[r] - zp[r];
          blk.op.add_adjoint(tbuf.head(ni), chunk_acc[c]);
        }
      }
      chunk_res[c] = res;
      chunk_obj[c] = obj;
    };

#ifdef CONVEXVAR_HAS_OPENMP
    if (config.parallel && nthreads > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
      for (int c = 0; c < nchunks; ++c) process_chunk(c);
    } else {
      for (int c = 0; c < nchunks; ++c) process_chunk(c);
    }
#else
    for (int c = 0; c < nchunks; ++c) process_chunk(c);
#endif

    acc.setZero();
    residual = 0;
    objective = 0;
    for (int c = 0; c < nchunks; ++c) {  // fixed order: deterministic sum
      acc += chunk_acc[c];
      residual = std::max(residual, chunk_res[c]);
      objective += chunk_obj[c];
    }

    if (sample) {
      report.trace.push_back({iter, residual, objective});
      if (callback) callback(iter, residual, objective);
    }
    if (residual <= config.primal_residual_tol) break;
  }
  iter = std::min(iter, config.max_iterations);

  // final x consistent with the last block update
  x = factor.solve(acc);
  objective = 0;
  {
    Eigen::VectorXd scratch;
    for (int i = 0; i < m; ++i) {
      const auto& blk = problem.blocks[i];
      if (blk.term.kind == ProxTerm::Kind::Indicator) continue;
      scratch.resize(blk.op.nrows());
      blk.op.apply(x, scratch);
      objective += blk.term.value(scratch);
    }
  }

  report.iterations = iter;
  report.final_residual = residual;
  report.final_objective = objective;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {x, report};
}

}  // namespace cvx
