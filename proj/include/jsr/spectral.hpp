#pragma once

#include "jsr/schur.hpp"
#include "jsr/types.hpp"

#include <vector>

namespace jsr {

// Pi = V diag(lambda, T) V^{-1} with |lambda_k| = 1 and rho(T) < 1.
struct SpectralSplit {
  CMatrix V;
  CMatrix Vinv;
  CVector lambda;  // leading eigenvalues, ordered by argument in [0, 2 pi)
  CMatrix T;       // upper triangular contracting block
  Index K = 0;

  Index dim() const { return V.rows(); }
  CMatrix delta() const;  // diag(lambda, T)
  CMatrix reconstruct() const { return V * delta() * Vinv; }
  // Leading columns of V.
  auto leading_vectors() const { return V.leftCols(K); }

  // Builds a split from explicit factors; V must be invertible.
  static SpectralSplit from_parts(const CMatrix& V, const CVector& lambda, const CMatrix& T);
};

inline constexpr double kDefaultLeadingTol = 1e-9;

double spectral_radius(const Matrix& m);

// Leading eigenvalues are those with |lambda| >= 1 - tol_leading. Throws
// NotAnSmpError when rho(pi) > 1 + tol_leading or a leading eigenvalue is
// defective.
SpectralSplit spectral_split(const Matrix& pi, double tol_leading = kDefaultLeadingTol);

// Unit eigenvectors for all eigenvalues with |lambda| >= rho (1 - tol), one per
// conjugate pair. The largest-modulus entry of each vector is real positive.
struct LeadingEigenpair {
  Complex value;
  CVector vector;
};
std::vector<LeadingEigenpair> leading_eigenpairs(const Matrix& pi, double tol = kDefaultLeadingTol);
std::vector<CVector> leading_eigenvectors(const Matrix& pi, double tol = kDefaultLeadingTol);

// Unit 2-norm, largest-modulus entry real positive.
CVector normalize_phase(const CVector& v);

}  // namespace jsr
