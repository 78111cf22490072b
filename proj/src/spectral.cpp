#include "jsr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace jsr {

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kNullTol = 1e-6;
constexpr double kReconstructTol = 1e-9;

struct Cluster {
  Complex mu;
  Index multiplicity = 0;
};

double arg_2pi(Complex z) {
  double a = std::arg(z);
  if (a < 0) a += 2 * std::numbers::pi;
  // Round-off near the positive real axis must not wrap to 2 pi.
  if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) a = z.real() >= 0 ? 0.0 : std::numbers::pi;
  return a;
}

// Groups eigenvalues with |lambda| >= threshold into clusters of nearby values.
std::vector<Cluster> leading_clusters(const CVector& ev, double threshold) {
  std::vector<Complex> lead;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) >= threshold) lead.push_back(ev(i));
  std::vector<Cluster> out;
  std::vector<bool> used(lead.size(), false);
  for (std::size_t i = 0; i < lead.size(); ++i) {
    if (used[i]) continue;
    Complex sum = lead[i];
    Index count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < lead.size(); ++j) {
      if (!used[j] && std::abs(lead[j] - lead[i]) <= kClusterTol) {
        used[j] = true;
        sum += lead[j];
        ++count;
      }
    }
    Complex mu = sum / static_cast<double>(count);
    if (std::abs(mu.imag()) <= kClusterTol) mu = Complex(mu.real(), 0.0);
    out.push_back({mu, count});
  }
  std::sort(out.begin(), out.end(),
            [](const Cluster& a, const Cluster& b) { return arg_2pi(a.mu) < arg_2pi(b.mu); });
  return out;
}

struct NullSpaces {
  CMatrix right;
  CMatrix left;
};

// Right and left null spaces of (pi - mu I) of dimension m, or throws.
NullSpaces null_spaces(const Matrix& pi, Complex mu, Index m) {
  const Index s = pi.rows();
  const double scale = std::max(1.0, norm2(pi));
  NullSpaces out;
  Eigen::VectorXd sv;
  if (mu.imag() == 0.0) {
    const Matrix shifted = pi - mu.real() * Matrix::Identity(s, s);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sv = svd.singularValues();
    out.right = svd.matrixV().rightCols(m).cast<Complex>();
    out.left = svd.matrixU().rightCols(m).cast<Complex>();
  } else {
    const CMatrix shifted = pi.cast<Complex>() - mu * CMatrix::Identity(s, s);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sv = svd.singularValues();
    out.right = svd.matrixV().rightCols(m);
    out.left = svd.matrixU().rightCols(m);
  }
  if (sv(s - m) > kNullTol * scale) {
    std::ostringstream os;
    os << "leading eigenvalue " << mu << " has algebraic multiplicity " << m
       << " but smaller geometric multiplicity (defective)";
    throw NotAnSmpError(os.str());
  }
  return out;
}

}  // namespace

CVector normalize_phase(const CVector& v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  CVector u = v / n;
  const double peak = u.cwiseAbs().maxCoeff();
  Index idx = 0;
  for (Index i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) >= peak * (1 - 1e-9)) {
      idx = i;
      break;
    }
  const Complex phase = std::conj(u(idx)) / std::abs(u(idx));
  u *= phase;
  u(idx) = Complex(u(idx).real(), 0.0);
  return u;
}

double spectral_radius(const Matrix& m) { return spectral_radius<double>(m); }

CMatrix SpectralSplit::delta() const {
  const Index s = V.rows();
  CMatrix d = CMatrix::Zero(s, s);
  for (Index k = 0; k < K; ++k) d(k, k) = lambda(k);
  d.bottomRightCorner(s - K, s - K) = T;
  return d;
}

SpectralSplit SpectralSplit::from_parts(const CMatrix& V, const CVector& lambda, const CMatrix& T) {
  const Index s = V.rows();
  if (V.cols() != s || lambda.size() + T.rows() != s || T.rows() != T.cols())
    throw DimensionError("SpectralSplit::from_parts: inconsistent block sizes");
  Eigen::PartialPivLU<CMatrix> lu(V);
  SpectralSplit out;
  out.V = V;
  out.Vinv = lu.inverse();
  if (!out.Vinv.allFinite()) throw DimensionError("SpectralSplit::from_parts: V is singular");
  out.lambda = lambda;
  out.T = T;
  out.K = lambda.size();
  return out;
}

SpectralSplit spectral_split(const Matrix& pi, double tol_leading) {
  detail::require_square(pi, "spectral_split");
  const Index s = pi.rows();
  const CVector ev = eigenvalues<double>(pi);
  const double rho = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  if (rho > 1 + tol_leading) {
    std::ostringstream os;
    os << "spectral_split: spectral radius " << rho << " exceeds one";
    throw NotAnSmpError(os.str());
  }
  const auto clusters = leading_clusters(ev, 1 - tol_leading);

  std::vector<CVector> vk;
  std::vector<Complex> lk;
  std::vector<Vector> left_real;
  for (const auto& c : clusters) {
    const NullSpaces ns = null_spaces(pi, c.mu, c.multiplicity);
    for (Index j = 0; j < c.multiplicity; ++j) {
      vk.push_back(normalize_phase(ns.right.col(j)));
      lk.push_back(c.mu);
      const CVector w = ns.left.col(j);
      if (c.mu.imag() == 0.0) {
        left_real.push_back(w.real());
      } else if (c.mu.imag() > 0) {
        // The conjugate cluster contributes conj(w); together they span Re w, Im w.
        left_real.push_back(w.real());
        left_real.push_back(w.imag());
      }
    }
  }
  const Index K = static_cast<Index>(vk.size());

  CMatrix V(s, s);
  for (Index k = 0; k < K; ++k) V.col(k) = vk[static_cast<std::size_t>(k)];
  CMatrix T(s - K, s - K);
  if (K < s) {
    Matrix W(s, static_cast<Index>(left_real.size()));
    for (Index j = 0; j < W.cols(); ++j) W.col(j) = left_real[static_cast<std::size_t>(j)];
    Eigen::HouseholderQR<Matrix> qr(W);
    const Matrix Q = qr.householderQ() * Matrix::Identity(s, s);
    const Matrix U = Q.rightCols(s - K);
    const Matrix B = U.transpose() * pi * U;
    const ComplexSchur<double> cs = complex_schur<double>(B);
    V.rightCols(s - K) = U.cast<Complex>() * cs.U;
    T = cs.T;
  }
  CVector lambda(K);
  for (Index k = 0; k < K; ++k) lambda(k) = lk[static_cast<std::size_t>(k)];

  SpectralSplit out;
  try {
    out = SpectralSplit::from_parts(V, lambda, T);
  } catch (const DimensionError&) {
    throw NotAnSmpError("spectral_split: leading eigenvectors are numerically dependent");
  }
  for (Index i = 0; i < T.rows(); ++i)
    if (std::abs(T(i, i)) >= 1 - tol_leading)
      throw NotAnSmpError("spectral_split: contracting block has an eigenvalue on the unit circle");
  const double err = norm2(out.reconstruct() - pi.cast<Complex>());
  if (err > kReconstructTol * std::max(norm2(pi), 1e-300)) {
    std::ostringstream os;
    os << "spectral_split: reconstruction error " << err << " too large (ill-conditioned split)";
    throw NotAnSmpError(os.str());
  }
  return out;
}

std::vector<LeadingEigenpair> leading_eigenpairs(const Matrix& pi, double tol) {
  detail::require_square(pi, "leading_eigenvectors");
  const CVector ev = eigenvalues<double>(pi);
  const double rho = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  if (rho == 0.0) throw ZeroSpectralRadiusError("leading_eigenvectors: spectral radius is zero");
  std::vector<LeadingEigenpair> out;
  for (const auto& c : leading_clusters(ev, rho * (1 - tol))) {
    if (c.mu.imag() < 0) continue;
    const NullSpaces ns = null_spaces(pi, c.mu, c.multiplicity);
    for (Index j = 0; j < c.multiplicity; ++j) out.push_back({c.mu, normalize_phase(ns.right.col(j))});
  }
  return out;
}

std::vector<CVector> leading_eigenvectors(const Matrix& pi, double tol) {
  std::vector<CVector> out;
  for (auto& p : leading_eigenpairs(pi, tol)) out.push_back(std::move(p.vector));
  return out;
}

}  // namespace jsr
