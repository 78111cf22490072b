#include "jsr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jsr {

namespace {

struct Phase {
  const Matrix& A;
  const Vector& b;
  const Vector& c;
  const std::vector<bool>& may_enter;
  const LpOptions& opt;
  Index cap;
};

Matrix basis_matrix(const Matrix& A, const std::vector<Index>& basis) {
  Matrix B(A.rows(), static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) B.col(static_cast<Index>(i)) = A.col(basis[i]);
  return B;
}

// Runs simplex pivots from a feasible basis. Returns false when unbounded.
bool iterate(const Phase& ph, std::vector<Index>& basis, Index& iterations) {
  const Index m = ph.A.rows();
  const Index n = ph.A.cols();
  std::vector<bool> in_basis(static_cast<std::size_t>(n), false);
  for (Index j : basis) in_basis[static_cast<std::size_t>(j)] = true;

  double last_obj = std::numeric_limits<double>::infinity();
  Index stall = 0;
  while (true) {
    if (iterations >= ph.cap)
      throw LpError("simplex: iteration cap of " + std::to_string(ph.cap) + " reached");
    Eigen::PartialPivLU<Matrix> lu(basis_matrix(ph.A, basis));
    const Vector xb = lu.solve(ph.b);
    Vector cb(m);
    for (Index i = 0; i < m; ++i) cb(i) = ph.c(basis[static_cast<std::size_t>(i)]);
    const Vector y = lu.transpose().solve(cb);
    const double obj = cb.dot(xb);
    if (obj < last_obj - 1e-14 * std::max(1.0, std::abs(obj))) {
      stall = 0;
      last_obj = obj;
    } else {
      ++stall;
    }
    const bool bland = stall >= ph.opt.stall_limit;

    const Vector reduced = ph.c - ph.A.transpose() * y;
    Index enter = -1;
    double best = -ph.opt.cost_tol;
    for (Index j = 0; j < n; ++j) {
      if (in_basis[static_cast<std::size_t>(j)] || !ph.may_enter[static_cast<std::size_t>(j)])
        continue;
      const double scale = std::max(1.0, ph.A.col(j).lpNorm<Eigen::Infinity>());
      const double dj = reduced(j) / scale;
      if (dj < best) {
        enter = j;
        if (bland) break;
        best = dj;
      }
    }
    if (enter < 0) return true;

    const Vector dir = lu.solve(ph.A.col(enter));
    Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i) {
      if (dir(i) <= ph.opt.pivot_tol) continue;
      const double r = std::max(xb(i), 0.0) / dir(i);
      const bool better = r < ratio - 1e-15 ||
                          (r <= ratio + 1e-15 && leave >= 0 &&
                           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]);
      if (leave < 0 || better) {
        leave = i;
        ratio = std::min(ratio, r);
      }
    }
    if (leave < 0) return false;
    in_basis[static_cast<std::size_t>(basis[static_cast<std::size_t>(leave)])] = false;
    basis[static_cast<std::size_t>(leave)] = enter;
    in_basis[static_cast<std::size_t>(enter)] = true;
    ++iterations;
  }
}

bool basis_feasible(const Matrix& A, const Vector& b, const std::vector<Index>& basis, double tol) {
  if (static_cast<Index>(basis.size()) != A.rows()) return false;
  const Matrix B = basis_matrix(A, basis);
  Eigen::FullPivLU<Matrix> lu(B);
  if (lu.rank() < A.rows()) return false;
  const Vector xb = lu.solve(b);
  return xb.minCoeff() >= -tol * std::max(1.0, b.lpNorm<Eigen::Infinity>());
}

LpResult finish(const Matrix& A, const Vector& b, const Vector& c, std::vector<Index> basis,
                Index iterations) {
  const Index m = A.rows();
  const Index n = A.cols();
  Eigen::PartialPivLU<Matrix> lu(basis_matrix(A, basis));
  const Vector xb = lu.solve(b);
  Vector cb(m);
  for (Index i = 0; i < m; ++i) cb(i) = c(basis[static_cast<std::size_t>(i)]);
  LpResult out;
  out.status = LpStatus::optimal;
  out.x = Vector::Zero(n);
  for (Index i = 0; i < m; ++i) out.x(basis[static_cast<std::size_t>(i)]) = std::max(xb(i), 0.0);
  out.dual = lu.transpose().solve(cb);
  out.objective = c.dot(out.x);
  out.basis = std::move(basis);
  out.iterations = iterations;
  return out;
}

}  // namespace

LpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& c,
                           const std::vector<Index>& warm_basis, const LpOptions& options) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m || c.size() != n) throw DimensionError("solve_standard_lp: size mismatch");
  const Index cap = options.iteration_cap > 0 ? options.iteration_cap : 50 * (m + n);
  Index iterations = 0;

  if (m == 0) {
    LpResult out;
    if (c.minCoeff() < 0) {
      out.status = LpStatus::unbounded;
      return out;
    }
    return finish(A, b, c, {}, 0);
  }

  if (!warm_basis.empty() && basis_feasible(A, b, warm_basis, options.feas_tol)) {
    std::vector<Index> basis = warm_basis;
    std::vector<bool> may_enter(static_cast<std::size_t>(n), true);
    if (!iterate({A, b, c, may_enter, options, cap}, basis, iterations)) {
      LpResult out;
      out.status = LpStatus::unbounded;
      out.iterations = iterations;
      return out;
    }
    return finish(A, b, c, std::move(basis), iterations);
  }

  // Phase one on [A s, I] with rows flipped so that b >= 0.
  Matrix A1(m, n + m);
  Vector b1 = b;
  A1.leftCols(n) = A;
  A1.rightCols(m).setIdentity();
  for (Index i = 0; i < m; ++i)
    if (b1(i) < 0) {
      b1(i) = -b1(i);
      A1.row(i).head(n) *= -1.0;
    }
  Vector c1 = Vector::Zero(n + m);
  c1.tail(m).setOnes();
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
  std::vector<bool> may_enter(static_cast<std::size_t>(n + m), true);
  iterate({A1, b1, c1, may_enter, options, cap}, basis, iterations);
  {
    Eigen::PartialPivLU<Matrix> lu(basis_matrix(A1, basis));
    const Vector xb = lu.solve(b1);
    double infeas = 0;
    for (Index i = 0; i < m; ++i)
      if (basis[static_cast<std::size_t>(i)] >= n) infeas += std::abs(xb(i));
    if (infeas > options.feas_tol * std::max(1.0, b1.lpNorm<1>())) {
      LpResult out;
      out.status = LpStatus::infeasible;
      out.iterations = iterations;
      return out;
    }
  }
  // Drive zero-level artificials out of the basis where possible.
  for (Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    Eigen::PartialPivLU<Matrix> lu(basis_matrix(A1, basis));
    const Matrix Binv_rows = lu.inverse();
    const Vector row = Binv_rows.row(i) * A1.leftCols(n);
    for (Index j = 0; j < n; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      if (std::abs(row(j)) > 1e-9) {
        basis[static_cast<std::size_t>(i)] = j;
        break;
      }
    }
  }
  // Phase two; remaining artificials sit on redundant rows and never enter again.
  Vector c2 = Vector::Zero(n + m);
  c2.head(n) = c;
  for (Index j = n; j < n + m; ++j) may_enter[static_cast<std::size_t>(j)] = false;
  if (!iterate({A1, b1, c2, may_enter, options, cap}, basis, iterations)) {
    LpResult out;
    out.status = LpStatus::unbounded;
    out.iterations = iterations;
    return out;
  }
  LpResult full = finish(A1, b1, c2, basis, iterations);
  LpResult out;
  out.status = LpStatus::optimal;
  out.x = full.x.head(n);
  out.objective = c.dot(out.x);
  out.dual = full.dual;
  for (Index i = 0; i < m; ++i)
    if (b(i) < 0) out.dual(i) = -out.dual(i);
  out.basis = std::move(full.basis);
  out.iterations = iterations;
  return out;
}

}  // namespace jsr
