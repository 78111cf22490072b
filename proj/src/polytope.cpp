#include "jsr/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace jsr {

namespace {

constexpr double kRankTol = 1e-12;
constexpr double kSpanTol = 1e-10;
constexpr double kPolarTol = 1e-9;
// Budget of (subset, sign) pairs for exact facet enumeration.
constexpr double kFacetBudget = 2e5;
constexpr Index kExactMaxDim = 6;

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

// max over sign vectors sigma of ||B^{-T} sigma||_2.
double cross_polytope_radius_bound(const Matrix& B) {
  const Index s = B.rows();
  Eigen::FullPivLU<Matrix> lu(B);
  const Matrix G = lu.inverse().transpose();
  if (s > 20) return std::sqrt(static_cast<double>(s)) * norm2(G);
  double best = 0.0;
  const std::uint64_t patterns = std::uint64_t{1} << (s - 1);
  Vector sigma(s);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    sigma(0) = 1.0;
    for (Index i = 1; i < s; ++i) sigma(i) = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    best = std::max(best, (G * sigma).norm());
  }
  return best;
}

// max ||h||_2 over vertices h of the polar body {h : |<h, v>| <= 1}.
double polar_radius_exact(const Matrix& V) {
  const Index s = V.rows();
  const Index N = V.cols();
  std::vector<Index> subset(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) subset[static_cast<std::size_t>(i)] = i;
  double best = 0.0;
  Matrix M(s, s);
  const std::uint64_t patterns = std::uint64_t{1} << (s - 1);
  while (true) {
    for (Index i = 0; i < s; ++i) M.row(i) = V.col(subset[static_cast<std::size_t>(i)]).transpose();
    Eigen::FullPivLU<Matrix> lu(M);
    if (lu.rank() == s) {
      for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        Vector sigma(s);
        sigma(0) = 1.0;
        for (Index i = 1; i < s; ++i) sigma(i) = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
        const Vector h = lu.solve(sigma);
        if ((V.transpose() * h).cwiseAbs().maxCoeff() <= 1 + kPolarTol) best = std::max(best, h.norm());
      }
    }
    // Next s-subset in lexicographic order.
    Index i = s - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == N - s + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < s; ++j)
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

SymPolytope::SymPolytope(Index dim) : vertices_(dim, 0) { refresh(); }

SymPolytope::SymPolytope(const std::vector<Vector>& vertices) {
  if (vertices.empty()) throw DimensionError("SymPolytope: no vertices");
  const Index s = vertices.front().size();
  vertices_.resize(s, static_cast<Index>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].size() != s) throw DimensionError("SymPolytope: vertex dimension mismatch");
    vertices_.col(static_cast<Index>(i)) = vertices[i];
  }
  refresh();
}

SymPolytope::SymPolytope(Matrix vertices) : vertices_(std::move(vertices)) { refresh(); }

void SymPolytope::add_vertex(const Vector& v) {
  if (v.size() != dim()) throw DimensionError("SymPolytope::add_vertex: dimension mismatch");
  vertices_.conservativeResize(Eigen::NoChange, vertices_.cols() + 1);
  vertices_.col(vertices_.cols() - 1) = v;
  refresh();
}

SymPolytope SymPolytope::with_vertex(const Vector& v) const {
  SymPolytope out = *this;
  out.add_vertex(v);
  return out;
}

void SymPolytope::refresh() {
  if (!vertices_.allFinite()) throw DimensionError("SymPolytope: non-finite vertex");
  const Index s = vertices_.rows();
  pivots_.clear();
  if (vertices_.cols() == 0 || s == 0) {
    rank_ = 0;
    range_ = Matrix(s, 0);
    reduced_ = Matrix(0, vertices_.cols());
    return;
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(vertices_);
  qr.setThreshold(kRankTol);
  rank_ = qr.rank();
  const Matrix Q = qr.householderQ() * Matrix::Identity(s, s);
  range_ = Q.leftCols(rank_);
  reduced_ = range_.transpose() * vertices_;
  for (Index i = 0; i < rank_; ++i) pivots_.push_back(qr.colsPermutation().indices()(i));
}

NormEvaluation minkowski_norm_detail(const SymPolytope& p, const Vector& x) {
  if (x.size() != p.dim()) throw DimensionError("minkowski_norm: dimension mismatch");
  NormEvaluation out;
  const double xn = x.norm();
  if (xn == 0.0) {
    out.value = 0.0;
    out.dual = Vector::Zero(x.size());
    out.coefficients = Vector::Zero(p.size());
    return out;
  }
  const Index r = p.rank();
  if (r == 0) return out;
  const Vector xr = p.range_basis().transpose() * x;
  if ((x - p.range_basis() * xr).norm() > kSpanTol * xn) return out;

  const Index N = p.size();
  Matrix A(r, 2 * N);
  A.leftCols(N) = p.reduced();
  A.rightCols(N) = -p.reduced();
  const Vector c = Vector::Ones(2 * N);

  Matrix Bp(r, r);
  for (Index i = 0; i < r; ++i) Bp.col(i) = p.reduced().col(p.pivots()[static_cast<std::size_t>(i)]);
  const Vector a0 = Bp.partialPivLu().solve(xr);
  std::vector<Index> warm(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) {
    const Index j = p.pivots()[static_cast<std::size_t>(i)];
    warm[static_cast<std::size_t>(i)] = a0(i) >= 0 ? j : N + j;
  }
  const LpResult lp = solve_standard_lp(A, xr, c, warm);
  if (lp.status != LpStatus::optimal) throw LpError("minkowski_norm: LP did not reach optimality");
  out.value = lp.objective;
  out.dual = p.range_basis() * lp.dual;
  out.coefficients = lp.x.head(N) - lp.x.tail(N);
  return out;
}

double minkowski_norm(const SymPolytope& p, const Vector& x) { return minkowski_norm_detail(p, x).value; }

double polytope_norm_of_matrix(const SymPolytope& p, const Matrix& A) {
  if (A.rows() != p.dim() || A.cols() != p.dim())
    throw DimensionError("polytope_norm_of_matrix: dimension mismatch");
  double best = 0.0;
  for (Index i = 0; i < p.size(); ++i) best = std::max(best, minkowski_norm(p, A * p.vertices().col(i)));
  return best;
}

SandwichConstants sandwich_constants(const SymPolytope& p) {
  if (!p.spans()) throw DimensionError("sandwich_constants: vertices do not span the space");
  const Index s = p.dim();
  const Index N = p.size();
  SandwichConstants out;
  out.r = 1.0 / p.vertices().colwise().norm().maxCoeff();
  const double work = binomial(N, s) * std::ldexp(1.0, static_cast<int>(s - 1));
  if (s <= kExactMaxDim && work <= kFacetBudget) {
    out.R = polar_radius_exact(p.vertices());
    out.method = "exact";
    return out;
  }
  Matrix B(s, s);
  for (Index i = 0; i < s; ++i) B.col(i) = p.vertices().col(p.pivots()[static_cast<std::size_t>(i)]);
  out.R = cross_polytope_radius_bound(B);
  out.method = "basis-bound";
  return out;
}

OneNormFactors cross_polytope_bounds(const SymPolytope& p) {
  if (!p.spans()) throw DimensionError("cross_polytope_bounds: vertices do not span the space");
  OneNormFactors out;
  out.lower = 1.0 / p.vertices().colwise().lpNorm<1>().maxCoeff();
  for (Index i = 0; i < p.dim(); ++i)
    out.upper = std::max(out.upper, minkowski_norm(p, Vector::Unit(p.dim(), i)));
  return out;
}

EllipticPolytope::EllipticPolytope(std::vector<CVector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw DimensionError("EllipticPolytope: no vertices");
  dim_ = vertices_.front().size();
  for (const auto& v : vertices_)
    if (v.size() != dim_) throw DimensionError("EllipticPolytope: vertex dimension mismatch");
}

bool EllipticPolytope::is_real() const {
  for (const auto& v : vertices_)
    if (v.imag().cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

SymPolytope EllipticPolytope::inscribed(Index M) const {
  if (M < 4 || M % 2 != 0) throw DimensionError("EllipticPolytope::inscribed: M must be even and >= 4");
  std::vector<Vector> pts;
  for (const auto& v : vertices_) {
    const Vector a = v.real(), b = v.imag();
    for (Index k = 0; k < M / 2; ++k) {
      const double t = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(M);
      pts.push_back(a * std::cos(t) + b * std::sin(t));
    }
  }
  return SymPolytope(pts);
}

EllipticSandwich elliptic_sandwich_constants(const EllipticPolytope& p) {
  EllipticSandwich out;
  double widest = 0.0;
  for (const auto& v : p.vertices()) {
    Matrix ab(p.dim(), 2);
    ab.col(0) = v.real();
    ab.col(1) = v.imag();
    widest = std::max(widest, norm2(ab));
  }
  out.r = 1.0 / widest;
  out.R = sandwich_constants(p.inscribed(4)).R;
  return out;
}

EllipticBounds elliptic_norm_bounds(const EllipticPolytope& p, const Vector& x, double threshold,
                                    Index max_chords) {
  EllipticBounds out;
  auto decide = [&] {
    if (out.ub <= threshold) out.membership = Membership::inside;
    else if (out.lb > threshold) out.membership = Membership::outside;
    else out.membership = Membership::inconclusive;
  };
  if (p.is_real()) {
    std::vector<Vector> re;
    for (const auto& v : p.vertices()) re.push_back(v.real());
    out.lb = out.ub = minkowski_norm(SymPolytope(re), x);
    decide();
    return out;
  }
  // M = 4 gives co_s(Re V u Im V); the ellipse-polygon factor cos(pi / M)
  // dominates the factor 1/2 relating the two hulls.
  for (Index M = 4; M <= max_chords; M *= 2) {
    const double n = minkowski_norm(p.inscribed(M), x);
    out.ub = std::min(out.ub, n);
    out.lb = std::max({out.lb, 0.5 * n, std::cos(std::numbers::pi / static_cast<double>(M)) * n});
    out.chords = M;
    decide();
    if (out.membership != Membership::inconclusive) break;
  }
  return out;
}

}  // namespace jsr
