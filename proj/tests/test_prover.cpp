#include "jsr/prover.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace jsr;

TEST_CASE("pm-one family: hybrid terminates, ipa does not") {
  const MatrixFamily f = testing::pm_one_family();
  ProverConfig cfg;
  const Certificate h = estimate_jsr(f, cfg);
  REQUIRE(h.certified());
  CHECK(h.lb == 1.0);
  CHECK(h.ub == 1.0);
  CHECK(h.vertices.cols() == 2);
  CHECK(verify_certificate(h).valid);

  cfg.mode = Mode::ipa;
  cfg.max_vertices = 60;
  SweepTrace trace;
  const auto search = find_candidates(f, 8);
  const Certificate i = prove_polytope(normalize(f, search.candidates.front()), search.candidates, cfg, true, &trace);
  CHECK_FALSE(i.certified());
  CHECK(trace.final_vertices.cols() >= 60);
  // Vertex counts only grow.
  for (std::size_t k = 1; k < trace.vertex_counts.size(); ++k)
    CHECK(trace.vertex_counts[k] >= trace.vertex_counts[k - 1]);
}

TEST_CASE("example family certifies in hybrid and tree modes") {
  const MatrixFamily f = testing::example_family();
  const Certificate h = estimate_jsr(f);
  REQUIRE(h.certified());
  CHECK(h.lb == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.ub == h.lb);
  CHECK(verify_certificate(h).valid);
}

TEST_CASE("tree mode with the 2-norm on a family with an orthogonal s.m.p.") {
  // A_1 orthogonal, A_2 small: every leaf bound is attained by A_1 powers.
  Matrix a(2, 2), b(2, 2);
  a << 0, -1, 1, 0;
  b << 0.3, 0.1, 0.0, 0.2;
  ProverConfig cfg;
  cfg.mode = Mode::tree;
  const Certificate c = estimate_jsr(MatrixFamily({a, b}), cfg);
  REQUIRE(c.certified());
  CHECK(c.ub == doctest::Approx(1.0));
  CHECK(c.norm == "2-norm");
  CHECK(verify_certificate(c).valid);
}

TEST_CASE("scalar and reducible families") {
  SUBCASE("1x1") {
    const Certificate c = estimate_jsr(MatrixFamily({Matrix::Constant(1, 1, -3.0), Matrix::Constant(1, 1, 2.0)}));
    CHECK(c.mode == Mode::scalar);
    CHECK(c.certified());
    CHECK(c.lb == 3.0);
    CHECK(c.ub == 3.0);
    CHECK(verify_certificate(c).valid);
  }
  SUBCASE("block triangular in a rotated basis") {
    std::mt19937_64 rng(51);
    Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
    a.block(0, 0, 2, 2) = testing::pm_one_family()[0];
    b.block(0, 0, 2, 2) = testing::pm_one_family()[1];
    a(2, 2) = 0.5;
    b(2, 2) = 0.25;
    a.block(0, 2, 2, 1) = testing::random_vector(rng, 2);
    b.block(0, 2, 2, 1) = testing::random_vector(rng, 2);
    const Eigen::HouseholderQR<Matrix> qr(testing::random_matrix(rng, 3, 3));
    const Matrix Q = qr.householderQ();
    const MatrixFamily f({Q * a * Q.transpose(), Q * b * Q.transpose()});
    const auto sub = find_invariant_subspace(f);
    REQUIRE(sub.has_value());
    for (std::size_t j = 0; j < f.size(); ++j) {
      const Matrix B = sub->Q.transpose() * f[j] * sub->Q;
      CHECK(B.bottomLeftCorner(3 - sub->dim, sub->dim).norm() < 1e-9);
    }
    const Certificate c = estimate_jsr(f);
    CHECK(c.mode == Mode::reduced);
    REQUIRE(c.certified());
    CHECK(c.ub == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(verify_certificate(c).valid);
  }
  SUBCASE("random families are irreducible") {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 10; ++t) CHECK_FALSE(find_invariant_subspace(testing::random_family(rng, 4, 2)).has_value());
  }
}

TEST_CASE("certified bounds respect the exhaustive lower bound") {
  std::mt19937_64 rng(53);
  int certified = 0;
  for (int t = 0; t < 30; ++t) {
    const MatrixFamily f = testing::random_family(rng, 2 + t % 2, 2);
    const Certificate c = estimate_jsr(f);
    CHECK(c.lb <= c.ub * (1 + 1e-12));
    double oracle = 0.0;
    for (const auto& w : testing::all_words(2, 8))
      oracle = std::max(oracle, std::pow(spectral_radius(word_product(f, w)), 1.0 / static_cast<double>(w.size())));
    CHECK(c.ub >= oracle - 1e-8);
    if (c.certified()) {
      ++certified;
      CHECK(verify_certificate(c).valid);
    }
  }
  CHECK(certified > 15);
}

TEST_CASE("scaling the family scales the bounds") {
  std::mt19937_64 rng(54);
  const MatrixFamily f = testing::random_family(rng, 3, 2);
  const Certificate c1 = estimate_jsr(f);
  const Certificate c2 = estimate_jsr(f.scaled(0.5));
  CHECK(c2.lb == doctest::Approx(0.5 * c1.lb).epsilon(1e-12));
  CHECK(c2.ub == doctest::Approx(0.5 * c1.ub).epsilon(1e-12));
  CHECK(c2.candidates.front().word == c1.candidates.front().word);
}

TEST_CASE("zero family is inconclusive with a zero upper bound") {
  const Certificate c = estimate_jsr(MatrixFamily({Matrix::Zero(2, 2), Matrix::Zero(2, 2)}));
  CHECK(c.lb == 0.0);
  CHECK(c.ub == 0.0);
}
