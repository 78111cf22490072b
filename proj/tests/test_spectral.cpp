#include "jsr/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace jsr;

namespace {

// Random matrix with prescribed leading eigenvalues and a contracting rest.
Matrix with_spectrum(std::mt19937_64& rng, const std::vector<double>& angles, Index n, double rest) {
  Matrix D = Matrix::Zero(n, n);
  Index k = 0;
  for (double a : angles) {
    if (a == 0.0 || a == std::numbers::pi) {
      D(k, k) = std::cos(a);
      k += 1;
    } else {
      D.block(k, k, 2, 2) << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
      k += 2;
    }
  }
  for (; k < n; ++k) D(k, k) = rest * (k % 2 == 0 ? 1 : -1);
  Matrix S = testing::random_matrix(rng, n, n) + 3 * Matrix::Identity(n, n);
  return S * D * S.inverse();
}

}  // namespace

TEST_CASE("spectral split reconstructs and separates the leading part") {
  std::mt19937_64 rng(5);
  for (const auto& angles : std::vector<std::vector<double>>{{0.0}, {std::numbers::pi}, {0.0, std::numbers::pi},
                                                             {1.0}, {0.0, 2.0}}) {
    const Matrix pi = with_spectrum(rng, angles, 5, 0.4);
    const SpectralSplit s = spectral_split(pi);
    Index expected_K = 0;
    for (double a : angles) expected_K += (a == 0.0 || a == std::numbers::pi) ? 1 : 2;
    CHECK(s.K == expected_K);
    CHECK((s.reconstruct() - pi.cast<Complex>()).norm() < 1e-9 * (1 + pi.norm()));
    CHECK((s.V * s.Vinv - CMatrix::Identity(5, 5)).norm() < 1e-9);
    for (Index k = 0; k < s.K; ++k) CHECK(std::abs(std::abs(s.lambda(k)) - 1.0) < 1e-9);
    for (Index k = 1; k < s.K; ++k) CHECK(std::arg(s.lambda(k - 1)) <= std::arg(s.lambda(k)) + 2 * std::numbers::pi);
    if (s.T.size() > 0) {
      Eigen::ComplexEigenSolver<CMatrix> es(s.T);
      CHECK(es.eigenvalues().cwiseAbs().maxCoeff() < 0.5);
    }
  }
}

TEST_CASE("spectral split refuses non-s.m.p. inputs") {
  Matrix jordan(2, 2);
  jordan << 1, 1, 0, 1;
  CHECK_THROWS_AS(spectral_split(jordan), NotAnSmpError);
  Matrix big = 2 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(spectral_split(big), NotAnSmpError);
}

TEST_CASE("leading eigenpairs are eigenvectors with unit norm and real positive pivot") {
  std::mt19937_64 rng(9);
  const Matrix pi = with_spectrum(rng, {0.0, 1.3}, 6, 0.2);
  const auto pairs = leading_eigenpairs(pi);
  REQUIRE(pairs.size() == 2);  // one per conjugate pair
  for (const auto& p : pairs) {
    CHECK((pi.cast<Complex>() * p.vector - p.value * p.vector).norm() < 1e-9);
    CHECK(p.vector.norm() == doctest::Approx(1.0));
    Index imax;
    p.vector.cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(p.vector(imax).imag()) < 1e-14);
    CHECK(p.vector(imax).real() > 0);
  }
  CHECK(leading_eigenvectors(pi).size() == 2);
}

TEST_CASE("spectral_radius of the pm-one family generators") {
  const MatrixFamily f = testing::pm_one_family();
  CHECK(spectral_radius(f[0]) == doctest::Approx(1.0));
  CHECK(spectral_radius(f[1]) == doctest::Approx(std::sqrt(0.5)));
}
