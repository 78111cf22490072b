#pragma once

#include "jsr/agtree.hpp"
#include "jsr/polytope.hpp"
#include "jsr/spectral.hpp"
#include "jsr/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jsr {

// Accumulation points of {Pi^n}: representatives Pi^l Pi_o for l < L.
struct LimitSet {
  std::vector<Matrix> representatives;
  bool finite = false;  // every leading eigenvalue is a root of unity
  Index L = 1;
  // lcm of the orders of the leading eigenvalues that are roots of unity.
  Index period = 1;
  std::vector<Index> orders;  // per leading eigenvalue; 0 when not a root of unity
  Matrix limit;               // Pi_o = V diag(1, ..., 1, 0) V^{-1}
};

// Finite case: L = lcm of the orders and Pi_o = lim Pi^(L n). Otherwise
// Pi_o is the same projector, which is an accumulation point because unimodular
// orbits are recurrent, and `samples` representatives are returned.
LimitSet accumulation_points(const SpectralSplit& split, double tol = 1e-12, int m_max = 64,
                             Index samples = 64);

struct LeadingError {
  double e_delta = 0.0;
  Index L = 1;
  // finite: exact zero. three-gap: single irrational angle after reducing
  // modulo the root-of-unity period, bounded by 2 sin(pi gap / 2).
  // sampled: orbit sampled over n <= 1e5, not a proof.
  std::string method;
  bool rigorous = true;
};

// sup_n min_{l < L} max_k |lambda_k^l - lambda_k^n|, with l restricted to
// l = n mod period when the limit set has root-of-unity parts.
LeadingError leading_error(const CVector& lambda, const LimitSet& limit, Index L);

// Max gap between consecutive points {j beta mod 1 : j < count} on the circle.
double orbit_max_gap(double beta, Index count);

using MatrixNorm = std::function<double(const CMatrix&)>;
double two_norm(const CMatrix& m);

struct TailBound {
  Index N = 1;                // smallest N with ||T^N|| <= c
  double max_contract = 0.0;  // max_{1 <= n <= N} ||T^n|| >= sup_{n >= 1} ||T^n||
  double c = 0.9;
  std::optional<double> M;        // rho_eps / eps
  std::optional<double> gamma_M;  // rho_eps
  std::optional<double> pseudo_bound;  // rho_eps^2 / eps >= sup_{n >= 1} ||T^n||
  double e_delta = 0.0;
  double epsilon = 0.0;
  std::string route = "direct";  // route giving the smaller bound

  double bound() const { return pseudo_bound ? std::min(max_contract, *pseudo_bound) : max_contract; }
};

// Throws Error when ||T^n|| stays above c up to n_max. When pseudo_eps > 0
// the pseudospectral constants are also computed (2-norm only).
TailBound tail_contraction_bound(const CMatrix& T, const MatrixNorm& norm = two_norm, double c = 0.9,
                                 Index n_max = 1000000, double pseudo_eps = 0.0);

// sup_{n >= n0} ||T^n||_2 <= max_{n0 <= r < n0 + N} ||T^r||_2.
double tail_sup_from(const CMatrix& T, Index n0, Index N);

struct PseudoSpectralRadius {
  double upper = 0.0;  // certified: no point of the eps-pseudospectrum beyond it
  double lower = 0.0;  // attained by a sampled point
  bool at_least_one = false;
};

// sup{|z| : ||(zI - D)^{-1}||_2 > 1 / eps} by angular refinement and a
// Lipschitz radial march; upper - lower <= tol unless the ray budget runs out.
PseudoSpectralRadius pseudo_spectral_radius_detail(const CMatrix& D, double eps, double tol = 1e-6);
double pseudo_spectral_radius(const CMatrix& D, double eps);

struct LeafConfig {
  Index n_explicit = 50;
  double epsilon = 1e-3;  // target for e_delta when Pi^infinity is infinite
  Index max_L = 4096;
  double root_tol = 1e-12;
  int m_max = 64;
  double contraction = 0.9;
  Index n_max = 1000000;
  bool pseudospectral = false;
  double threshold = 1.0;  // stop refining L once the bound is at most this
};

struct LeafVerdict {
  double bound = kInfinity;  // sup_n ||X Pi^n v|| <= bound
  bool refuted = false;      // a limit representative lies outside the unit ball
  Index witness = -1;        // l of the refuting representative
  double explicit_max = 0.0; // max_{n <= n_explicit} ||X Pi^n v||
  double tail_estimate = kInfinity;  // bound on sup_{n > n_explicit}
  double estimate_all = kInfinity;   // bound on sup over all n
  double limit_max = 0.0;            // max_l ||q^{l o}||
  double xv_norm = 0.0;
  double wK_norm = 0.0;
  double wR_norm = 0.0;
  double tail_sup = 0.0;
  double e_delta = 0.0;
  double C = 1.0;
  Index L = 1;
  Index N = 1;
  bool finite = true;
  std::string method;
};

// Bound on sup_n N(X Pi^n Y) where N is `norm` and C converts 2-norm bounds
// into N-bounds (C_P for polytope norms of vectors, 1 for the matrix 2-norm).
LeafVerdict certify_leaf(const Matrix& X, const Matrix& Pi, const SpectralSplit& split, const Matrix& Y,
                         const std::function<double(const Matrix&)>& norm, double C,
                         const LeafConfig& cfg = {});

LeafVerdict certify_leaf_in_polytope(const Matrix& X, const Matrix& Pi, const SpectralSplit& split,
                                     const Vector& v, const SymPolytope& P, const SandwichConstants& sc,
                                     const LeafConfig& cfg = {});

// Either the 2-norm or the polytope norm with its sandwich constants.
struct NormChoice {
  const SymPolytope* polytope = nullptr;
  const SandwichConstants* sandwich = nullptr;

  bool is_two_norm() const { return polytope == nullptr; }
  double matrix_norm(const Matrix& A) const;
};

// sup over the leaf family of matrix norms. Singleton leaves are evaluated
// directly; for a generator core the sup is taken per vertex of the polytope
// (or over the whole matrix for the 2-norm).
double leaf_norm_bound(const NodeFamily& leaf, const MatrixFamily& family, const NormChoice& norm,
                       const LeafConfig& cfg = {});

}  // namespace jsr
