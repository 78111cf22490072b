#pragma once

// Hessenberg reduction and Francis double-shift QR, real and complex Schur
// forms. Header-only; Scalar is any real floating type.

#include "jsr/types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace jsr {

template <typename Scalar>
struct HessenbergForm {
  Mat<Scalar> H;  // upper Hessenberg
  Mat<Scalar> Q;  // orthogonal, A = Q H Q^T
};

template <typename Scalar>
struct RealSchur {
  Mat<Scalar> T;  // quasi upper triangular; 2x2 blocks only for complex pairs
  Mat<Scalar> Z;  // orthogonal, A = Z T Z^T
};

template <typename Scalar>
struct ComplexSchur {
  Mat<std::complex<Scalar>> T;  // upper triangular
  Mat<std::complex<Scalar>> U;  // unitary, A = U T U^*
};

namespace detail {

// Householder vector v such that (I - beta v v^T) x = alpha e_1.
template <typename Scalar>
bool householder(const Vec<Scalar>& x, Vec<Scalar>& v, Scalar& beta) {
  const Scalar norm = x.norm();
  v = x;
  if (norm == Scalar(0)) {
    beta = Scalar(0);
    return false;
  }
  const Scalar alpha = x(0) >= Scalar(0) ? -norm : norm;
  v(0) -= alpha;
  const Scalar vv = v.squaredNorm();
  if (vv == Scalar(0)) {
    beta = Scalar(0);
    return false;
  }
  beta = Scalar(2) / vv;
  return true;
}

// Rows r0..r0+m-1 of M, columns c0..c1 inclusive: M <- (I - beta v v^T) M.
template <typename Scalar>
void reflect_rows(Mat<Scalar>& M, const Vec<Scalar>& v, Scalar beta, Index r0, Index c0, Index c1) {
  const Index m = v.size();
  for (Index j = c0; j <= c1; ++j) {
    Scalar dot = 0;
    for (Index i = 0; i < m; ++i) dot += v(i) * M(r0 + i, j);
    dot *= beta;
    for (Index i = 0; i < m; ++i) M(r0 + i, j) -= dot * v(i);
  }
}

// Rows r0..r1 inclusive, columns c0..c0+m-1: M <- M (I - beta v v^T).
template <typename Scalar>
void reflect_cols(Mat<Scalar>& M, const Vec<Scalar>& v, Scalar beta, Index r0, Index r1, Index c0) {
  const Index m = v.size();
  for (Index i = r0; i <= r1; ++i) {
    Scalar dot = 0;
    for (Index j = 0; j < m; ++j) dot += M(i, c0 + j) * v(j);
    dot *= beta;
    for (Index j = 0; j < m; ++j) M(i, c0 + j) -= dot * v(j);
  }
}

// Plane rotation [c s; -s c] acting on rows/columns k, k+1.
template <typename Scalar>
void rotate_rows(Mat<Scalar>& M, Index k, Scalar c, Scalar s, Index c0, Index c1) {
  for (Index j = c0; j <= c1; ++j) {
    const Scalar a = M(k, j), b = M(k + 1, j);
    M(k, j) = c * a + s * b;
    M(k + 1, j) = -s * a + c * b;
  }
}

template <typename Scalar>
void rotate_cols(Mat<Scalar>& M, Index k, Scalar c, Scalar s, Index r0, Index r1) {
  for (Index i = r0; i <= r1; ++i) {
    const Scalar a = M(i, k), b = M(i, k + 1);
    M(i, k) = c * a + s * b;
    M(i, k + 1) = -s * a + c * b;
  }
}

template <typename Scalar>
void require_square(const Mat<Scalar>& a, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": matrix must be square");
  if (!a.allFinite()) throw DimensionError(std::string(who) + ": non-finite entry");
}

// Splits a 2x2 diagonal block with real eigenvalues into triangular form.
template <typename Scalar>
void standardize_block(Mat<Scalar>& T, Mat<Scalar>& Z, Index k) {
  const Index n = T.rows();
  const Scalar a = T(k, k), b = T(k, k + 1), c = T(k + 1, k), d = T(k + 1, k + 1);
  if (c == Scalar(0)) return;
  const Scalar p = (a - d) / 2;
  const Scalar q = p * p + b * c;
  if (q < Scalar(0)) return;
  const Scalar root = std::sqrt(q);
  const Scalar z = p >= Scalar(0) ? p + root : p - root;
  // (z, c) is an eigenvector for the eigenvalue d + z.
  const Scalar r = std::hypot(z, c);
  if (r == Scalar(0)) return;
  const Scalar cs = z / r, sn = c / r;
  rotate_rows(T, k, cs, sn, k, n - 1);
  rotate_cols(T, k, cs, sn, 0, std::min(k + 1, n - 1));
  rotate_cols(Z, k, cs, sn, 0, n - 1);
  T(k + 1, k) = Scalar(0);
}

}  // namespace detail

template <typename Scalar>
HessenbergForm<Scalar> hessenberg(const Mat<Scalar>& a) {
  detail::require_square(a, "hessenberg");
  const Index n = a.rows();
  HessenbergForm<Scalar> out{a, Mat<Scalar>::Identity(n, n)};
  Vec<Scalar> v;
  Scalar beta;
  for (Index k = 0; k + 2 < n; ++k) {
    const Vec<Scalar> x = out.H.col(k).segment(k + 1, n - k - 1);
    if (!detail::householder(x, v, beta)) continue;
    detail::reflect_rows(out.H, v, beta, k + 1, k, n - 1);
    detail::reflect_cols(out.H, v, beta, 0, n - 1, k + 1);
    detail::reflect_cols(out.Q, v, beta, 0, n - 1, k + 1);
    for (Index i = k + 2; i < n; ++i) out.H(i, k) = Scalar(0);
  }
  return out;
}

// Francis double-shift QR on the Hessenberg form. Throws NonConvergenceError
// after 30 * n iterations in total.
template <typename Scalar>
RealSchur<Scalar> real_schur(const Mat<Scalar>& a) {
  auto hf = hessenberg(a);
  Mat<Scalar>& H = hf.H;
  Mat<Scalar>& Z = hf.Q;
  const Index n = a.rows();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Index cap = 30 * std::max<Index>(n, 1);
  Index total = 0;
  Index iter = 0;
  Index hi = n - 1;
  Vec<Scalar> v, x3(3), x2(2);
  Scalar beta;

  Scalar anorm = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = std::max<Index>(i - 1, 0); j < n; ++j) anorm += std::abs(H(i, j));

  while (hi >= 0) {
    Index lo = hi;
    while (lo > 0) {
      Scalar s = std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo));
      if (s == Scalar(0)) s = anorm;
      if (std::abs(H(lo, lo - 1)) <= eps * s) {
        H(lo, lo - 1) = Scalar(0);
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (lo == hi - 1) {
      detail::standardize_block(H, Z, hi - 1);
      hi -= 2;
      iter = 0;
      continue;
    }
    if (++total > cap)
      throw NonConvergenceError("real_schur: QR iteration did not converge within " +
                                std::to_string(cap) + " iterations");
    ++iter;

    Scalar sum, prod;
    if (iter % 10 == 0) {
      // Exceptional shift.
      const Scalar s = std::abs(H(hi, hi - 1)) + std::abs(H(hi - 1, hi - 2));
      const Scalar h11 = Scalar(0.75) * s + H(hi, hi);
      const Scalar h12 = Scalar(-0.4375) * s;
      sum = 2 * h11;
      prod = h11 * h11 - h12 * s;
    } else {
      sum = H(hi - 1, hi - 1) + H(hi, hi);
      prod = H(hi - 1, hi - 1) * H(hi, hi) - H(hi - 1, hi) * H(hi, hi - 1);
    }

    Scalar x = H(lo, lo) * H(lo, lo) + H(lo, lo + 1) * H(lo + 1, lo) - sum * H(lo, lo) + prod;
    Scalar y = H(lo + 1, lo) * (H(lo, lo) + H(lo + 1, lo + 1) - sum);
    Scalar z = H(lo + 1, lo) * H(lo + 2, lo + 1);
    for (Index k = lo; k + 1 < hi; ++k) {
      x3 << x, y, z;
      if (detail::householder(x3, v, beta)) {
        const Index c0 = std::max(lo, k - 1);
        detail::reflect_rows(H, v, beta, k, c0, n - 1);
        detail::reflect_cols(H, v, beta, 0, std::min(k + 3, hi), k);
        detail::reflect_cols(Z, v, beta, 0, n - 1, k);
        if (k > lo) H(k + 1, k - 1) = H(k + 2, k - 1) = Scalar(0);
      }
      x = H(k + 1, k);
      y = H(k + 2, k);
      if (k + 2 < hi) z = H(k + 3, k);
    }
    x2 << x, y;
    if (detail::householder(x2, v, beta)) {
      detail::reflect_rows(H, v, beta, hi - 1, hi - 2, n - 1);
      detail::reflect_cols(H, v, beta, 0, hi, hi - 1);
      detail::reflect_cols(Z, v, beta, 0, n - 1, hi - 1);
      H(hi, hi - 2) = Scalar(0);
    }
  }
  for (Index i = 2; i < n; ++i)
    for (Index j = 0; j + 1 < i; ++j) H(i, j) = Scalar(0);
  return {std::move(H), std::move(Z)};
}

// Complex triangular form from the real quasi-triangular one.
template <typename Scalar>
ComplexSchur<Scalar> complex_schur(const Mat<Scalar>& a) {
  using C = std::complex<Scalar>;
  const RealSchur<Scalar> rs = real_schur(a);
  const Index n = a.rows();
  Mat<C> T = rs.T.template cast<C>();
  Mat<C> U = rs.Z.template cast<C>();
  for (Index m = n - 1; m >= 1; --m) {
    if (T(m, m - 1) == C(0)) continue;
    const C a11 = T(m - 1, m - 1), a12 = T(m - 1, m), a21 = T(m, m - 1), a22 = T(m, m);
    const C half = (a11 - a22) / Scalar(2);
    const C disc = std::sqrt(half * half + a12 * a21);
    const C mu = half + disc;  // eigenvalue of the block minus a22
    const Scalar r = std::hypot(std::abs(mu), std::abs(a21));
    const C c = mu / r, s = a21 / r;
    // G = [conj(c) s; -s c]
    for (Index j = m - 1; j < n; ++j) {
      const C t1 = T(m - 1, j), t2 = T(m, j);
      T(m - 1, j) = std::conj(c) * t1 + s * t2;
      T(m, j) = -s * t1 + c * t2;
    }
    for (Index i = 0; i <= m; ++i) {
      const C t1 = T(i, m - 1), t2 = T(i, m);
      T(i, m - 1) = t1 * c + t2 * std::conj(s);
      T(i, m) = -t1 * std::conj(s) + t2 * std::conj(c);
    }
    for (Index i = 0; i < n; ++i) {
      const C t1 = U(i, m - 1), t2 = U(i, m);
      U(i, m - 1) = t1 * c + t2 * std::conj(s);
      U(i, m) = -t1 * std::conj(s) + t2 * std::conj(c);
    }
    T(m, m - 1) = C(0);
  }
  return {std::move(T), std::move(U)};
}

// Eigenvalues in Schur order; complex pairs appear as (re + i im, re - i im).
template <typename Scalar>
Vec<std::complex<Scalar>> eigenvalues(const Mat<Scalar>& a) {
  using C = std::complex<Scalar>;
  const Mat<Scalar> T = real_schur(a).T;
  const Index n = T.rows();
  Vec<C> out(n);
  for (Index i = 0; i < n;) {
    if (i + 1 < n && T(i + 1, i) != Scalar(0)) {
      const Scalar p = (T(i, i) - T(i + 1, i + 1)) / 2;
      const Scalar q = p * p + T(i, i + 1) * T(i + 1, i);
      const Scalar re = T(i + 1, i + 1) + p;
      const Scalar im = std::sqrt(std::abs(q));
      out(i) = C(re, im);
      out(i + 1) = C(re, -im);
      i += 2;
    } else {
      out(i) = C(T(i, i), 0);
      ++i;
    }
  }
  return out;
}

template <typename Scalar>
Scalar spectral_radius(const Mat<Scalar>& a) {
  detail::require_square(a, "spectral_radius");
  if (a.rows() == 0) return Scalar(0);
  return eigenvalues(a).cwiseAbs().maxCoeff();
}

}  // namespace jsr
