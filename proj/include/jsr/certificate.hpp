#pragma once

#include "jsr/agtree.hpp"
#include "jsr/candidates.hpp"
#include "jsr/leafbound.hpp"
#include "jsr/polytope.hpp"
#include "jsr/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jsr {

enum class Mode { tree, ipa, hybrid, tree_warmstart, scalar, reduced };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

// How a polytope vertex entered V.
struct VertexOrigin {
  Index root = -1;    // index into Certificate::roots for root vertices
  Index parent = -1;  // vertex whose image this is
  Word word;          // letters applied to the root eigenvector
};

// Real or imaginary part of a leading eigenvector of candidate `candidate`.
struct RootRecord {
  Index candidate = 0;
  Complex eigenvalue;
  std::string part = "re";
  double scale = 1.0;
};

// One (A,G)-tree. For polytope modes it proves that every uncovered leaf maps
// vertex `vertex` into co_s V; in tree mode `vertex` is -1 and leaves are
// bounded as matrices.
struct TreeRecord {
  Index vertex = -1;
  AGTree tree{1};
};

struct LeafRecord {
  Index tree = 0;
  Index node = 0;
  double bound = kInfinity;
  std::string method;
};

struct Certificate {
  MatrixFamily family;  // matrices as supplied; family.scale() is unused
  double scale = 1.0;   // lambda the matrices are divided by before proving
  Mode mode = Mode::hybrid;
  std::vector<SmpCandidate> candidates;  // words of the normalized family
  std::string norm = "polytope";         // polytope | 2-norm
  Matrix vertices;                       // one vertex per column
  std::vector<VertexOrigin> origins;
  std::vector<RootRecord> roots;
  std::optional<SandwichConstants> sandwich;
  std::vector<TreeRecord> trees;
  std::vector<LeafRecord> leaves;
  double strict_margin = 1e-10;  // search parameter; informational

  double lb = 0.0;
  double ub = kInfinity;
  std::string status = "inconclusive";  // certified | inconclusive
  std::vector<std::string> notes;

  // Reducible input: Q^T A_j Q is block upper triangular with diagonal blocks
  // of the given sizes, each proved by the matching sub-certificate.
  std::optional<Matrix> reduction_basis;
  std::vector<Index> block_sizes;
  std::vector<Certificate> blocks;

  Index sweeps = 0;
  double seconds = 0.0;

  bool certified() const { return status == "certified"; }
  // Matrices divided by the scale.
  MatrixFamily normalized() const;
};

class CertificateParseError : public Error {
 public:
  using Error::Error;
};

// Doubles are written in shortest round-trip form, so parsing restores every
// value bit for bit.
std::string to_json(const Certificate& cert, int indent = 2);
Certificate parse_certificate(const std::string& text);

struct VerificationReport {
  bool valid = false;
  std::vector<std::string> failures;
  Index leaves_checked = 0;
  double max_deviation = 0.0;  // largest |stored - recomputed| leaf bound
};

inline constexpr double kReplayTol = 1e-9;

// Leaf parameters shared by every prover and the verifier. They are fixed
// rather than stored so a certificate cannot change how its bounds replay.
LeafConfig replay_leaf_config();

// Replays the certificate from its family, words and vertices only: tree
// structure and coverage, every leaf bound, span of V, and the result fields.
VerificationReport verify_certificate(const Certificate& cert);

// Bound on sup over the leaf family of ||L v||_P (vertex trees) or of the
// matrix norm (tree mode). Shared by the provers and the verifier.
struct LeafEvaluation {
  double bound = kInfinity;
  std::string method;
};
LeafEvaluation evaluate_leaf(const NodeFamily& leaf, const MatrixFamily& family, const Vector* vertex,
                             const NormChoice& norm, const LeafConfig& cfg);

}  // namespace jsr
