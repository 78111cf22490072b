#pragma once

#include "jsr/types.hpp"

#include <vector>

namespace jsr {

struct SmpCandidate {
  Word word;
  double averaged_spectral_radius = 0.0;  // rho(A_g)^{1/|g|}
  bool normalized = false;
};

struct CandidateSearch {
  // Co-candidates (within the tie tolerance of the best) first, shortest and
  // lexicographically smallest first; then the rest by decreasing radius.
  std::vector<SmpCandidate> candidates;
  double lb = 0.0;  // max rho(A_w)^{1/|w|} over all |w| <= max_len
  double ub = 0.0;  // 2-norm branch-and-bound upper bound on the JSR
  Index evaluated = 0;
};

inline constexpr double kCoCandidateTol = 1e-8;

// Branch and bound over words of length <= max_len. Only primitive words in
// minimal rotation are evaluated, so no two candidates are cyclic rotations or
// powers of one another. Returns at most `keep` candidates plus ties.
CandidateSearch find_candidates(const MatrixFamily& family, int max_len, int keep = 8);

// Default search length keeping J^max_len near 4096.
int default_max_len(std::size_t letters);

// Divides every matrix by lambda = rho(A_g)^{1/|g|}; scale is multiplied by lambda.
MatrixFamily normalize(const MatrixFamily& family, const SmpCandidate& candidate);
double averaged_spectral_radius(const MatrixFamily& family, const Word& w);

double lower_bound(const MatrixFamily& family, int max_len);

}  // namespace jsr
