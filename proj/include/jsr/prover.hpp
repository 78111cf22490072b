#pragma once

#include "jsr/candidates.hpp"
#include "jsr/certificate.hpp"
#include "jsr/leafbound.hpp"
#include "jsr/polytope.hpp"
#include "jsr/types.hpp"

#include <optional>
#include <vector>

namespace jsr {

struct ProverConfig {
  Mode mode = Mode::hybrid;
  Index max_depth = 12;           // tree mode
  Index max_tree_nodes = 20000;   // tree mode
  Index max_vertices = 200;
  Index max_sweeps = 1000;
  double strict_margin = 1e-10;   // a point is accepted when its norm is <= 1 - strict_margin
  Index subtree_depth = 4;        // hybrid (*)-line subtrees
  bool finite_subtrees_only = false;
  // Hybrid roots: every leading eigenvector of every co-candidate. The ipa
  // driver always starts from the primary eigenvector only.
  bool all_leading_roots = true;
  Index warmstart_sweeps = 3;     // tree+warmstart
  bool tree_polytope_norm = false;  // tree mode: use `tree_polytope` instead of the 2-norm
  std::optional<SymPolytope> tree_polytope;
  int max_len = 0;  // candidate search length; 0 picks default_max_len(J)
  int keep = 8;
  bool reduce = true;
  unsigned threads = 0;  // 0: JSR_THREADS or hardware concurrency
};

// All drivers expect a normalized family: rho of the top candidate is one.
// They return certificates with scale 1; estimate_jsr rescales.
Certificate prove_tree(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                       const ProverConfig& cfg);
Certificate prove_ipa(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                      const ProverConfig& cfg);
Certificate prove_hybrid(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                         const ProverConfig& cfg);

// Vertex sets after each sweep of the polytope drivers; used to compare ipa
// with its hybrid generalization.
struct SweepTrace {
  std::vector<Index> vertex_counts;
  Matrix final_vertices;
};
Certificate prove_polytope(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                           const ProverConfig& cfg, bool ipa, SweepTrace* trace = nullptr);

// Full pipeline: reducibility split, candidate search, normalization, proof,
// rescaling. The certificate's lb and ub bound the JSR of the raw family.
Certificate estimate_jsr(const MatrixFamily& family, const ProverConfig& cfg = {});

// Proper common invariant subspaces found from eigenvectors of a fixed random
// combination of the matrices (and of their transposes). Returns an
// orthonormal Q whose leading `dim` columns span the subspace, or nothing.
struct InvariantSubspace {
  Matrix Q;
  Index dim = 0;
};
std::optional<InvariantSubspace> find_invariant_subspace(const MatrixFamily& family, double tol = 1e-10);

}  // namespace jsr
