#include "jsr/polytope.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace jsr;

TEST_CASE("unit square norms") {
  // co_s{(1,1), (1,-1)} is the unit cube; the norm is the max norm.
  Matrix V(2, 2);
  V << 1, 1, 1, -1;
  const SymPolytope P(V);
  REQUIRE(P.spans());
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Vector x = testing::random_vector(rng, 2);
    CHECK(minkowski_norm(P, x) == doctest::Approx(x.cwiseAbs().maxCoeff()).epsilon(1e-10));
  }
  const auto sc = sandwich_constants(P);
  CHECK(sc.r == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(sc.R == doctest::Approx(1.0));
  CHECK(sc.method == "exact");
}

TEST_CASE("cross-polytope gives the 1-norm") {
  const SymPolytope P(Matrix(Matrix::Identity(4, 4)));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Vector x = testing::random_vector(rng, 4);
    const auto d = minkowski_norm_detail(P, x);
    CHECK(d.value == doctest::Approx(x.lpNorm<1>()).epsilon(1e-10));
    CHECK((P.vertices() * d.coefficients - x).norm() < 1e-9);
    CHECK(d.coefficients.lpNorm<1>() == doctest::Approx(d.value).epsilon(1e-9));
    CHECK((P.vertices().transpose() * d.dual).cwiseAbs().maxCoeff() <= 1 + 1e-9);
    CHECK(d.dual.dot(x) == doctest::Approx(d.value).epsilon(1e-9));
  }
}

TEST_CASE("norm axioms on random polytopes") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Index s = 2 + t % 4;
    const SymPolytope P(testing::random_matrix(rng, s, s + 3));
    for (int k = 0; k < 20; ++k) {
      const Vector x = testing::random_vector(rng, s), y = testing::random_vector(rng, s);
      const double nx = minkowski_norm(P, x), ny = minkowski_norm(P, y);
      CHECK(minkowski_norm(P, x + y) <= nx + ny + 1e-9);
      CHECK(minkowski_norm(P, -2.5 * x) == doctest::Approx(2.5 * nx).epsilon(1e-9));
    }
    for (Index i = 0; i < P.size(); ++i) CHECK(minkowski_norm(P, P.vertex(i)) <= 1 + 1e-9);
    CHECK(minkowski_norm(P, Vector::Zero(s)) == 0.0);
  }
}

TEST_CASE("points outside the span have infinite norm") {
  Matrix V(3, 2);
  V << 1, 0, 0, 1, 0, 0;
  const SymPolytope P(V);
  CHECK_FALSE(P.spans());
  CHECK(P.rank() == 2);
  CHECK(minkowski_norm(P, Vector::Unit(3, 2)) == kInfinity);
  CHECK(minkowski_norm(P, Vector::Unit(3, 0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sandwich_constants(P), DimensionError);
}

TEST_CASE("adding vertices only shrinks the norm") {
  std::mt19937_64 rng(4);
  SymPolytope P(testing::random_matrix(rng, 3, 3));
  const Vector x = testing::random_vector(rng, 3);
  double last = minkowski_norm(P, x);
  for (int k = 0; k < 10; ++k) {
    P.add_vertex(testing::random_vector(rng, 3));
    const double now = minkowski_norm(P, x);
    CHECK(now <= last + 1e-12);
    last = now;
  }
}

TEST_CASE("matrix norm is the max over vertex images") {
  std::mt19937_64 rng(5);
  const SymPolytope P(testing::random_matrix(rng, 3, 5));
  const Matrix A = testing::random_matrix(rng, 3, 3);
  const double nA = polytope_norm_of_matrix(P, A);
  for (int k = 0; k < 50; ++k) {
    const Vector x = testing::random_vector(rng, 3);
    CHECK(minkowski_norm(P, A * x) <= nA * minkowski_norm(P, x) + 1e-9);
  }
}

TEST_CASE("basis-bound sandwich is valid where exact enumeration is skipped") {
  std::mt19937_64 rng(6);
  const SymPolytope P(testing::random_matrix(rng, 8, 12));
  const auto sc = sandwich_constants(P);
  CHECK(sc.method == "basis-bound");
  for (int k = 0; k < 50; ++k) {
    const Vector x = testing::random_vector(rng, 8);
    const double n = minkowski_norm(P, x);
    CHECK(sc.r * x.norm() <= n * (1 + 1e-9));
    CHECK(n <= sc.R * x.norm() * (1 + 1e-9));
  }
}

TEST_CASE("elliptic polytope bounds") {
  SUBCASE("a circle is the Euclidean ball") {
    CVector v(2);
    v << Complex(1, 0), Complex(0, 1);
    const EllipticPolytope E({v});
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
      const Vector x = testing::random_vector(rng, 2);
      // Threshold at the true value keeps the bracket refining to the cap.
      const auto b = elliptic_norm_bounds(E, x, x.norm(), 1 << 12);
      CHECK(b.lb <= x.norm() * (1 + 1e-9));
      CHECK(b.ub >= x.norm() * (1 - 1e-9));
      CHECK(b.ub - b.lb <= 1e-5 * x.norm());
    }
    const auto sc = elliptic_sandwich_constants(E);
    CHECK(sc.r == doctest::Approx(1.0));
  }
  SUBCASE("real vertices reduce to the symmetric hull") {
    CVector v(2);
    v << Complex(1, 0), Complex(1, 0);
    CVector w(2);
    w << Complex(1, 0), Complex(-1, 0);
    const EllipticPolytope E({v, w});
    CHECK(E.is_real());
    Vector x(2);
    x << 0.3, -0.2;
    const auto b = elliptic_norm_bounds(E, x);
    CHECK(b.lb == b.ub);
    CHECK(b.ub == doctest::Approx(0.3));
    CHECK(b.membership == Membership::inside);
  }
  SUBCASE("sandwich on random complex vertex sets") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
      const Index s = 2 + t % 3;
      std::vector<CVector> vs;
      for (int k = 0; k < 3; ++k)
        vs.push_back(testing::random_vector(rng, s).cast<Complex>() +
                     Complex(0, 1) * testing::random_vector(rng, s).cast<Complex>());
      const EllipticPolytope E(vs);
      const auto sc = elliptic_sandwich_constants(E);
      for (int k = 0; k < 20; ++k) {
        const Vector x = testing::random_vector(rng, s);
        const auto b = elliptic_norm_bounds(E, x, kInfinity, 256);
        CHECK(sc.r * x.norm() <= b.ub * (1 + 1e-9));
        CHECK(b.lb <= sc.R * x.norm() * (1 + 1e-9));
      }
    }
  }
  SUBCASE("inscribed polygon needs even M >= 4") {
    CVector v(2);
    v << Complex(1, 0), Complex(0, 1);
    CHECK_THROWS_AS(EllipticPolytope({v}).inscribed(3), DimensionError);
  }
}
