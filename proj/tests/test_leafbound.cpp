#include "jsr/leafbound.hpp"
#include "jsr/schur.hpp"
#include "jsr/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace jsr;

namespace {

CMatrix contracting_block(std::mt19937_64& rng, Index n, double rho) {
  const Matrix a = testing::random_matrix(rng, n, n);
  const auto cs = complex_schur(a);
  const double r = std::max(spectral_radius(a), 1e-12);
  return cs.T * (rho / r);
}

Matrix rotation(double t) {
  Matrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

// S diag(blocks) S^{-1} with a fixed well-conditioned S.
Matrix conjugated(std::mt19937_64& rng, const Matrix& D) {
  const Index n = D.rows();
  const Matrix S = testing::random_matrix(rng, n, n) + 3 * Matrix::Identity(n, n);
  return S * D * S.inverse();
}

}  // namespace

TEST_CASE("tail contraction bound dominates the brute-force power norms") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const CMatrix T = contracting_block(rng, 2 + t % 4, 0.3 + 0.6 * (t % 7) / 7.0);
    const TailBound tb = tail_contraction_bound(T);
    CMatrix P = T;
    double brute = 0.0;
    for (int n = 1; n <= 1000; ++n) {
      brute = std::max(brute, norm2(P));
      P = (P * T).eval();
    }
    CHECK(tb.bound() >= brute - 1e-12);
    CHECK(tb.max_contract >= brute - 1e-12);
  }
}

TEST_CASE("tail_sup_from covers every power beyond n0") {
  std::mt19937_64 rng(42);
  const CMatrix T = contracting_block(rng, 4, 0.85);
  const TailBound tb = tail_contraction_bound(T);
  for (Index n0 : {1, 5, 20}) {
    const double s = tail_sup_from(T, n0, tb.N);
    CMatrix P = CMatrix::Identity(4, 4);
    for (Index n = 1; n < n0; ++n) P = (P * T).eval();
    double brute = 0.0;
    for (Index n = n0; n < n0 + 400; ++n) {
      P = (P * T).eval();
      brute = std::max(brute, norm2(P));
    }
    CHECK(s >= brute - 1e-12);
  }
}

TEST_CASE("tail contraction bound fails loudly on non-contracting input") {
  CMatrix J(2, 2);
  J << 1.0, 0.0, 0.0, 0.5;
  CHECK_THROWS_AS(tail_contraction_bound(J, two_norm, 0.9, 1000), Error);
}

TEST_CASE("orbit max gap matches sorting") {
  for (double beta : {std::sqrt(2.0) - 1, (std::sqrt(5.0) - 1) / 2, 0.123456789}) {
    for (Index count : {2, 10, 97, 500}) {
      std::vector<double> pts;
      for (Index j = 0; j < count; ++j) {
        const double x = static_cast<double>(j) * beta;
        pts.push_back(x - std::floor(x));
      }
      std::sort(pts.begin(), pts.end());
      double gap = pts.front() + 1 - pts.back();
      for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, pts[i] - pts[i - 1]);
      CHECK(orbit_max_gap(beta, count) == doctest::Approx(gap).epsilon(1e-9));
    }
  }
}

TEST_CASE("pseudospectral radius") {
  SUBCASE("normal matrices: rho + eps") {
    CMatrix D = CMatrix::Zero(3, 3);
    D(0, 0) = 0.5;
    D(1, 1) = Complex(0, -0.3);
    D(2, 2) = -0.1;
    const auto r = pseudo_spectral_radius_detail(D, 0.1);
    CHECK(r.upper >= 0.6 - 1e-9);
    CHECK(r.lower <= 0.6 + 1e-9);
    CHECK(r.upper - r.lower <= 1e-5);
  }
  SUBCASE("at least rho and monotone in eps") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 10; ++t) {
      const CMatrix D = contracting_block(rng, 3, 0.7);
      Eigen::ComplexEigenSolver<CMatrix> es(D);
      const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
      double last = 0.0;
      for (double eps : {1e-3, 1e-2, 5e-2, 0.2}) {
        const double p = pseudo_spectral_radius(D, eps);
        CHECK(p >= rho);
        CHECK(p >= last - 1e-9);
        last = p;
      }
    }
  }
}

TEST_CASE("accumulation points and leading error") {
  std::mt19937_64 rng(44);
  SUBCASE("finite limit set for a fifth root of unity and -1") {
    Matrix D = Matrix::Zero(4, 4);
    D.block(0, 0, 2, 2) = rotation(2 * std::numbers::pi / 5);
    D(2, 2) = -1;
    D(3, 3) = 0.3;
    const SpectralSplit s = spectral_split(conjugated(rng, D));
    const LimitSet ls = accumulation_points(s);
    CHECK(ls.finite);
    CHECK(ls.L == 10);
    CHECK(ls.representatives.size() == 10);
    const LeadingError le = leading_error(s.lambda.head(s.K), ls, ls.L);
    CHECK(le.e_delta == 0.0);
    CHECK(le.method == "finite");
    CHECK(le.rigorous);
  }
  SUBCASE("irrational rotation uses the three-gap bound") {
    Matrix D = Matrix::Zero(3, 3);
    D.block(0, 0, 2, 2) = rotation(1.0);
    D(2, 2) = 0.5;
    const SpectralSplit s = spectral_split(conjugated(rng, D));
    const LimitSet ls = accumulation_points(s);
    CHECK_FALSE(ls.finite);
    const LeadingError le = leading_error(s.lambda.head(s.K), ls, 256);
    CHECK(le.method == "three-gap");
    CHECK(le.rigorous);
    // Independent check over a window of exponents.
    double worst = 0.0;
    for (Index n = 0; n < 5000; ++n) {
      double best = kInfinity;
      for (Index l = 0; l < 256; ++l)
        best = std::min(best, std::abs(std::exp(Complex(0, 1.0 * l)) - std::exp(Complex(0, 1.0 * n))));
      worst = std::max(worst, best);
    }
    CHECK(le.e_delta >= worst - 1e-12);
  }
}

TEST_CASE("certified leaf bounds dominate explicit products") {
  std::mt19937_64 rng(45);
  const std::vector<Matrix> blocks = {
      (Matrix(2, 2) << 1, 0, 0, -1).finished(),
      rotation(2 * std::numbers::pi / 3),
      rotation(0.7),
  };
  for (const Matrix& lead : blocks) {
    for (int t = 0; t < 5; ++t) {
      Matrix D = Matrix::Zero(4, 4);
      D.block(0, 0, 2, 2) = lead;
      D.block(2, 2, 2, 2) << 0.6, 0.9, 0.0, -0.5;
      const Matrix Pi = conjugated(rng, D);
      const SpectralSplit s = spectral_split(Pi);
      const Matrix X = testing::random_matrix(rng, 4, 4) * 0.3;
      const Matrix Y = testing::random_vector(rng, 4);
      const auto norm = [](const Matrix& m) { return norm2(m); };
      const LeafVerdict v = certify_leaf(X, Pi, s, Y, norm, 1.0);
      Matrix P = Y;
      double brute = 0.0;
      for (int n = 0; n <= 500; ++n) {
        brute = std::max(brute, (X * P).norm());
        P = (Pi * P).eval();
      }
      CHECK(v.bound >= brute - 1e-9);
      CHECK(v.explicit_max <= v.bound);
      CHECK(v.finite == (&lead != &blocks[2]));
    }
  }
}

TEST_CASE("leaf_norm_bound on singleton and generator leaves") {
  const MatrixFamily f = testing::pm_one_family();
  const NormChoice two;
  // {A_2}: a single matrix.
  CHECK(leaf_norm_bound(NodeFamily{Word{1}, std::nullopt, 0, Word{}}, f, two) == doctest::Approx(1.0));
  // {A_2 A_1^n}: sup is ||A_2|| = 1 since A_1 is orthogonal.
  CHECK(leaf_norm_bound(NodeFamily{Word{}, Word{0}, 0, Word{1}}, f, two) >= 1.0 - 1e-12);
  Matrix V(2, 2);
  V << 1, 0, 0, 0.75;
  const SymPolytope P(V);
  const SandwichConstants sc = sandwich_constants(P);
  const NormChoice poly{&P, &sc};
  // A_2 maps e1 to (0, 1/2) and 0.75 e2 to (0.75, 0): norm max(2/3, 0.75).
  CHECK(poly.matrix_norm(f[1]) == doctest::Approx(0.75));
  CHECK(leaf_norm_bound(NodeFamily{Word{}, Word{0}, 0, Word{1}}, f, poly) <= 0.75 + 1e-9);
}
