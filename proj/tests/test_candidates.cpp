#include "jsr/candidates.hpp"
#include "jsr/schur.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace jsr;

namespace {

double oracle_lb(const MatrixFamily& f, std::size_t len) {
  double best = 0.0;
  for (const auto& w : testing::all_words(f.size(), len))
    best = std::max(best, std::pow(spectral_radius(word_product(f, w)), 1.0 / static_cast<double>(w.size())));
  return best;
}

}  // namespace

TEST_CASE("pm-one family: A_1 is the unique s.m.p. candidate") {
  const auto s = find_candidates(testing::pm_one_family(), 8);
  REQUIRE_FALSE(s.candidates.empty());
  CHECK(s.candidates.front().word == Word{0});
  CHECK(s.lb == doctest::Approx(1.0));
  CHECK(s.ub >= s.lb);
  for (std::size_t i = 1; i < s.candidates.size(); ++i)
    CHECK(s.candidates[i].averaged_spectral_radius < 1 - kCoCandidateTol);
}

TEST_CASE("example family: A_2 attains radius one") {
  const auto s = find_candidates(testing::example_family(), 8);
  REQUIRE_FALSE(s.candidates.empty());
  CHECK(s.candidates.front().word == Word{1});
  CHECK(s.candidates.front().averaged_spectral_radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("search lower bound equals the exhaustive oracle") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const MatrixFamily f = testing::random_family(rng, 2 + t % 2, 2);
    const auto s = find_candidates(f, 6);
    const double oracle = oracle_lb(f, 6);
    CHECK(s.lb == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(s.ub >= oracle * (1 - 1e-12));
    REQUIRE_FALSE(s.candidates.empty());
    CHECK(s.candidates.front().averaged_spectral_radius == doctest::Approx(s.lb).epsilon(1e-12));
    for (const auto& c : s.candidates) {
      CHECK(c.word.is_primitive());
      CHECK(c.word == c.word.canonical_rotation());
      CHECK(c.averaged_spectral_radius == doctest::Approx(averaged_spectral_radius(f, c.word)).epsilon(1e-12));
    }
  }
}

TEST_CASE("no two candidates share a cycle class") {
  std::mt19937_64 rng(22);
  const MatrixFamily f = testing::random_family(rng, 3, 3);
  const auto s = find_candidates(f, 5, 20);
  for (std::size_t i = 0; i < s.candidates.size(); ++i)
    for (std::size_t j = i + 1; j < s.candidates.size(); ++j)
      CHECK_FALSE(s.candidates[i].word.same_cycle_class(s.candidates[j].word));
}

TEST_CASE("normalize divides by the candidate radius") {
  std::mt19937_64 rng(23);
  const MatrixFamily f = testing::random_family(rng, 3, 2);
  const auto s = find_candidates(f, 6);
  const MatrixFamily n = normalize(f, s.candidates.front());
  CHECK(averaged_spectral_radius(n, s.candidates.front().word) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n.scale() == doctest::Approx(s.lb).epsilon(1e-12));
  CHECK((n[0] * n.scale() - f[0]).norm() < 1e-12 * f[0].norm());
}

TEST_CASE("default search length") {
  CHECK(default_max_len(2) == 12);
  CHECK(default_max_len(4) == 6);
  CHECK(default_max_len(1) >= 1);
  CHECK(lower_bound(testing::pm_one_family(), 4) == doctest::Approx(1.0));
}
