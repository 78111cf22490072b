#pragma once

#include "jsr/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace jsr::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Index n) { return random_matrix(rng, n, 1); }

inline MatrixFamily random_family(std::mt19937_64& rng, Index dim, std::size_t count) {
  std::vector<Matrix> ms;
  for (std::size_t j = 0; j < count; ++j) ms.push_back(random_matrix(rng, dim, dim));
  return MatrixFamily(std::move(ms));
}

// Every word of length 1..len, shortest first.
inline std::vector<Word> all_words(std::size_t letters, std::size_t len) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (std::size_t n = 1; n <= len; ++n) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (std::size_t j = 0; j < letters; ++j) next.push_back(w.then(static_cast<int>(j)));
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline MatrixFamily pm_one_family() {
  Matrix a(2, 2), b(2, 2);
  a << 1, 0, 0, -1;
  b << 0, 1, 0.5, 0;
  return MatrixFamily({a, b});
}

// Entries k / sqrt(13).
inline MatrixFamily example_family() {
  const double q = 1.0 / std::sqrt(13.0);
  Matrix a(3, 3), b(3, 3);
  a << 0, -1, 2, 1, 0, -1, 2, -2, 1;
  b << 1, -2, 2, -2, 2, 1, 2, 1, -2;
  return MatrixFamily({a * q, b * q});
}

}  // namespace jsr::testing
