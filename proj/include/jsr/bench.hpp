#pragma once

#include "jsr/prover.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jsr {

struct BenchTrial {
  Index dim = 0;
  Index trial = 0;
  Index ipa_vertices = 0;
  Index hybrid_vertices = 0;
  bool ipa_certified = false;
  bool hybrid_certified = false;
  double ipa_seconds = 0.0;
  double hybrid_seconds = 0.0;
};

struct BenchRow {
  Index dim = 0;
  double vertex_ratio = 0.0;  // median of hybrid / ipa vertex counts
  double time_ratio = 0.0;    // median of hybrid / ipa run times
  Index trials = 0;           // trials where both drivers certified
  Index inconclusive = 0;     // trials excluded from the ratios
};

struct BenchReport {
  std::uint64_t seed = 0;
  Index letters = 2;
  std::vector<BenchRow> rows;
  std::vector<BenchTrial> trials;

  std::string table() const;
  // Machine-readable report; timings are omitted when with_times is false so
  // that two runs with the same seed compare equal.
  std::string to_json(bool with_times = true) const;
};

struct BenchConfig {
  std::vector<Index> dims{4, 6, 8};
  Index trials = 20;
  std::uint64_t seed = 1;
  Index letters = 2;
  ProverConfig prover = [] {
    ProverConfig c;
    c.max_vertices = 400;
    c.finite_subtrees_only = true;
    return c;
  }();
};

// Family of `letters` matrices with standard normal entries, drawn from a
// generator seeded by (seed, dim, trial).
MatrixFamily random_family(std::uint64_t seed, Index dim, Index trial, Index letters = 2);

// Normalizes each family by its best candidate, then runs the invariant
// polytope driver and the hybrid driver restricted to finite subtrees.
BenchReport run_bench(const BenchConfig& cfg);

}  // namespace jsr
