#pragma once

#include "jsr/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jsr {

// {A_X A_g^n A_W : n >= m}, or the singleton {A_X A_W} without a core.
// As words: W first, then g^n, then X.
struct NodeFamily {
  Word W;
  std::optional<Word> g;
  Index m = 0;
  Word X;

  bool has_core() const { return g.has_value(); }
  // W ++ g^(m + n) ++ X.
  Word instance(Index n = 0) const;
  std::string to_string() const;

  friend bool operator==(const NodeFamily&, const NodeFamily&) = default;
};

// Normal form: letters moved from the end of W into X while W ends with the
// last letter of g (rotating g), then whole copies of g absorbed from the front
// of X into m. Both steps preserve the word set.
NodeFamily canonical(const NodeFamily& f);

// True when every word of `sub` is a word of `super`, decided by word
// rewriting only. False negatives are possible, false positives are not.
bool family_subset(const NodeFamily& sub, const NodeFamily& super);

enum class EdgeKind { root, sibling, generator };

struct AGNode {
  NodeFamily family;
  Index parent = -1;
  EdgeKind edge = EdgeKind::root;
  int letter = -1;  // sibling edges
  Word generator;   // generator edges
  std::vector<Index> children;
  bool covered = false;

  bool is_leaf() const { return children.empty(); }
};

class AGTree {
 public:
  explicit AGTree(std::size_t letters);

  Index root() const { return 0; }
  std::size_t letters() const { return letters_; }
  Index size() const { return static_cast<Index>(nodes_.size()); }
  const AGNode& node(Index i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const std::vector<AGNode>& nodes() const { return nodes_; }

  // J children {A_j P}. Throws when the node is already expanded or covered.
  std::vector<Index> expand_sibling(Index node);
  // Child {A_g^n P : n >= 0}. rho_g is rho(A_g) and must not exceed 1 + 1e-12.
  // Nodes that already carry a core accept only the same g applied directly
  // after it (exponent folding); other nesting is refused.
  Index expand_generator(Index node, const Word& g, double rho_g);

  // Leaf family contained in the family of a strict ancestor.
  bool detect_covered(Index leaf) const;
  // Sets the covered mark when detect_covered holds; returns the mark.
  bool mark_covered(Index leaf);

  // Uncovered leaves in depth-first order.
  std::vector<Index> leafage() const;
  std::vector<NodeFamily> leafage_families() const;

  // Checks every structural rule; returns a description of the first
  // violation. Generator radii are checked against `radii` when given.
  std::optional<std::string> validate(const std::map<Word, double>* radii = nullptr) const;

  // Unchecked construction used when replaying a serialized tree.
  Index add_raw(AGNode node);

 private:
  std::size_t letters_;
  std::vector<AGNode> nodes_;
};

inline constexpr double kGeneratorRadiusTol = 1e-12;

}  // namespace jsr
