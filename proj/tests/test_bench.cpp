#include "jsr/bench.hpp"

#include <doctest.h>

using namespace jsr;

TEST_CASE("random families are reproducible and independent across trials") {
  const MatrixFamily a = random_family(7, 4, 0), b = random_family(7, 4, 0), c = random_family(7, 4, 1);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK_FALSE(a[0] == c[0]);
  CHECK_FALSE(random_family(8, 4, 0)[0] == a[0]);
  CHECK(random_family(7, 5, 0, 3).size() == 3);
}

TEST_CASE("bench output is deterministic apart from timings") {
  BenchConfig cfg;
  cfg.dims = {2, 3};
  cfg.trials = 3;
  cfg.seed = 5;
  const BenchReport r1 = run_bench(cfg);
  const BenchReport r2 = run_bench(cfg);
  CHECK(r1.to_json(false) == r2.to_json(false));
  REQUIRE(r1.rows.size() == 2);
  for (const auto& row : r1.rows) CHECK(row.trials + row.inconclusive == 3);
  CHECK(r1.trials.size() == 6);
  CHECK(r1.table().find("dim") != std::string::npos);
}
