#pragma once

#include "convexvar/experiments.hpp"

#include <string>
#include <vector>

namespace cvx {

/// One verified invariant: measured value against its bound.
struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

/// max ell(I_delta |x-x0|^2) <= delta^2 - eps^2 over all generated
/// constraints, exact up to arithmetic.
std::vector<CheckResult> verify_lemma_2_12();

/// Constant field 1 meets every consecutive-triple circle constraint with
/// value exactly cos(eps) - 1 (and below -eps^2/5).
std::vector<CheckResult> verify_lemma_3_5();

/// Grid non-density reproduction: corner error stays >= 0.15 when eps << delta,
/// max error <= 0.05 and non-increasing when eps = 2 delta.
std::vector<CheckResult> verify_chone_lemeur(bool include_finest, const SolverConfig& solver);

/// Random cone projections against the exhaustive active-set oracle, plus
/// warm-start consistency.
std::vector<CheckResult> verify_cones_oracle(int instances, uint64_t seed);

/// Interpolation operator properties (L1)-(L3) with C_I = 1 on a battery of
/// smooth test functions with closed-form constants.
std::vector<CheckResult> verify_interpolation(uint64_t seed);

/// Envelope gap bound |g - conv g|_inf <= 12 d eps Lip(g) for solver-feasible
/// random fields; the sharp empirical ratio is logged in the detail.
std::vector<CheckResult> verify_envelope_bound(int fields, uint64_t seed,
                                               const SolverConfig& solver);

/// Small denoising instances against the exhaustive QP oracle and the
/// gamma-robustness of the converged objective.
std::vector<CheckResult> verify_sdmm_oracle(const SolverConfig& solver);

}  // namespace cvx
