#pragma once

#include "jsr/simplex.hpp"
#include "jsr/types.hpp"

#include <limits>
#include <string>
#include <vector>

namespace jsr {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// co_s V = convex hull of V and -V. The Minkowski norm is finite only on the
// span of V; it is a norm on R^s when V spans.
class SymPolytope {
 public:
  SymPolytope() = default;
  explicit SymPolytope(Index dim);
  explicit SymPolytope(const std::vector<Vector>& vertices);
  explicit SymPolytope(Matrix vertices);  // one vertex per column

  Index dim() const { return vertices_.rows(); }
  Index size() const { return vertices_.cols(); }
  const Matrix& vertices() const { return vertices_; }
  Vector vertex(Index i) const { return vertices_.col(i); }
  Index rank() const { return rank_; }
  bool spans() const { return rank_ == dim() && dim() > 0; }

  void add_vertex(const Vector& v);
  SymPolytope with_vertex(const Vector& v) const;

  // Orthonormal basis of span V and the reduced vertex matrix Q^T V.
  const Matrix& range_basis() const { return range_; }
  const Matrix& reduced() const { return reduced_; }
  // Column indices of a basis of span V, chosen by column pivoting.
  const std::vector<Index>& pivots() const { return pivots_; }

 private:
  void refresh();

  Matrix vertices_;
  Matrix range_;
  Matrix reduced_;
  std::vector<Index> pivots_;
  Index rank_ = 0;
};

struct NormEvaluation {
  double value = kInfinity;
  // Supporting functional: |<h, v>| <= 1 for every vertex and <h, x> = value.
  Vector dual;
  Vector coefficients;  // a with x = V a and ||a||_1 = value
};

// ||x||_P = inf{t > 0 : x in t co_s V}; +infinity when x is outside span V.
NormEvaluation minkowski_norm_detail(const SymPolytope& p, const Vector& x);
double minkowski_norm(const SymPolytope& p, const Vector& x);

// max over vertices v of ||A v||_P.
double polytope_norm_of_matrix(const SymPolytope& p, const Matrix& A);

// r ||x||_2 <= ||x||_P <= R ||x||_2.
struct SandwichConstants {
  double r = 0.0;  // 1 / max_v ||v||_2
  double R = 0.0;  // 1 / inradius of co_s V, or an upper bound for it
  // exact: R from full facet enumeration. basis-bound: R bounded through the
  // cross-polytope of a vertex basis, which contains no point outside co_s V.
  std::string method;
  // Factor converting a 2-norm bound into a P-norm bound.
  double C_P() const { return R; }
};

SandwichConstants sandwich_constants(const SymPolytope& p);

// a ||x||_1 <= ||x||_P <= b ||x||_1 with a = 1 / max_v ||v||_1, b = max_i ||e_i||_P.
struct OneNormFactors {
  double lower = 0.0;
  double upper = 0.0;
};
OneNormFactors cross_polytope_bounds(const SymPolytope& p);

// co_e V = convex hull of the ellipses {a cos t + b sin t} for v = a + i b.
class EllipticPolytope {
 public:
  EllipticPolytope() = default;
  explicit EllipticPolytope(std::vector<CVector> vertices);

  Index dim() const { return dim_; }
  const std::vector<CVector>& vertices() const { return vertices_; }
  bool is_real() const;
  // co_s of the M / 2 points t_k = 2 pi k / M on every ellipse; M >= 4, even.
  SymPolytope inscribed(Index M) const;

 private:
  std::vector<CVector> vertices_;
  Index dim_ = 0;
};

// r ||x||_2 <= ||x||_{co_e V} <= R ||x||_2 for real x. r uses the largest
// semi-axis over all ellipses; R is the sandwich R of co_s(Re V u Im V),
// which lies inside co_e V.
struct EllipticSandwich {
  double r = 0.0;
  double R = 0.0;
};
EllipticSandwich elliptic_sandwich_constants(const EllipticPolytope& p);

enum class Membership { inside, outside, inconclusive };

struct EllipticBounds {
  double lb = 0.0;
  double ub = kInfinity;
  Index chords = 0;  // M used for the final bracket; 0 for the exact real case
  Membership membership = Membership::inconclusive;
};

// Brackets ||x||_{co_e V}. Refines the inscribed polygons until the bracket
// decides ||x|| <= threshold or > threshold, or M reaches max_chords.
EllipticBounds elliptic_norm_bounds(const EllipticPolytope& p, const Vector& x,
                                    double threshold = 1.0, Index max_chords = Index{1} << 14);

}  // namespace jsr
