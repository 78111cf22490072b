#include "jsr/simplex.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace jsr;

TEST_CASE("small LP with a known optimum") {
  // min -x1 - 2 x2  s.t. x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6.
  Matrix A(2, 4);
  A << 1, 1, 1, 0, 1, 3, 0, 1;
  Vector b(2), c(4);
  b << 4, 6;
  c << -1, -2, 0, 0;
  const LpResult r = solve_standard_lp(A, b, c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(-5.0));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded programs are reported") {
  Matrix A(1, 2);
  A << 1, 1;
  Vector b(1), c(2);
  b << -1;
  c << 1, 1;
  CHECK(solve_standard_lp(A, b, c).status == LpStatus::infeasible);
  Matrix A2(1, 2);
  A2 << 1, -1;
  Vector b2(1), c2(2);
  b2 << 1;
  c2 << -1, 0;
  CHECK(solve_standard_lp(A2, b2, c2).status == LpStatus::unbounded);
}

TEST_CASE("random bounded programs satisfy strong duality and complementary slackness") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Index m = 2 + t % 5, n = m + 3 + t % 7;
    Matrix A = testing::random_matrix(rng, m, n);
    // b = A x0 with x0 > 0 keeps the program feasible; c > 0 keeps it bounded.
    Vector x0(n), c(n);
    for (Index j = 0; j < n; ++j) {
      x0(j) = u(rng);
      c(j) = u(rng);
    }
    const Vector b = A * x0;
    const LpResult r = solve_standard_lp(A, b, c);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK((A * r.x - b).norm() < 1e-8 * (1 + b.norm()));
    CHECK(r.x.minCoeff() >= -1e-9);
    CHECK(r.objective == doctest::Approx(c.dot(r.x)).epsilon(1e-9));
    CHECK(r.objective == doctest::Approx(b.dot(r.dual)).epsilon(1e-7));
    const Vector reduced = c - A.transpose() * r.dual;
    CHECK(reduced.minCoeff() >= -1e-8);
    CHECK(std::abs(reduced.dot(r.x)) < 1e-7);
    CHECK(r.objective <= c.dot(x0) + 1e-9);
    // A warm start from the optimal basis reproduces the optimum.
    const LpResult w = solve_standard_lp(A, b, c, r.basis);
    CHECK(w.objective == doctest::Approx(r.objective).epsilon(1e-9));
  }
}

TEST_CASE("degenerate program terminates") {
  // Many redundant constraints through the same vertex.
  const Index m = 6, n = 12;
  Matrix A = Matrix::Zero(m, n);
  for (Index i = 0; i < m; ++i) {
    A(i, 0) = 1;
    A(i, 1) = static_cast<double>(i + 1);
    A(i, 2 + i) = 1;
  }
  Vector b = Vector::Zero(m), c = Vector::Zero(n);
  c(0) = -1;
  c(1) = -1;
  const LpResult r = solve_standard_lp(A, b, c);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == doctest::Approx(0.0));
}

TEST_CASE("dimension mismatch throws") {
  CHECK_THROWS_AS(solve_standard_lp(Matrix(2, 3), Vector(3), Vector(3)), Error);
}
