#pragma once

#include "jsr/types.hpp"

#include <vector>

namespace jsr {

class LpError : public Error {
 public:
  using Error::Error;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  Vector x;                  // primal solution, length n
  Vector dual;               // y with A^T y <= c, length m
  std::vector<Index> basis;  // basic column indices, length m
  Index iterations = 0;
};

struct LpOptions {
  double cost_tol = 1e-11;
  double pivot_tol = 1e-11;
  double feas_tol = 1e-9;
  // Consecutive non-improving pivots before switching to Bland's rule.
  Index stall_limit = 50;
  // 0 means 50 * (m + n).
  Index iteration_cap = 0;
};

// min c^T x  s.t.  A x = b, x >= 0, by the revised simplex method with a dense
// LU of the basis. A feasible warm basis skips phase one; otherwise artificial
// variables are used. Throws LpError when the iteration cap is reached.
LpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& c,
                           const std::vector<Index>& warm_basis = {},
                           const LpOptions& options = {});

}  // namespace jsr
