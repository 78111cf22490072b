#include "jsr/agtree.hpp"

#include <algorithm>
#include <sstream>

namespace jsr {

namespace {

Word rotate_right(const Word& w) {
  std::vector<int> l = w.letters();
  std::rotate(l.rbegin(), l.rbegin() + 1, l.rend());
  return Word(std::move(l));
}

// Word set {W h^(offset + step n) X : n >= 0} with h primitive.
struct Extended {
  Word W;
  Word h;
  Index step = 1;
  Index offset = 0;
  Word X;
};

// Moves letters from the end of W to the front of X, rotating `core` and
// `aux` in step.
void push_letters(Word& W, Word& core, Word& X, Word* aux) {
  while (!W.empty() && W.back() == core.back()) {
    const int a = W.back();
    W = W.slice(0, W.size() - 1);
    core = rotate_right(core);
    if (aux) *aux = rotate_right(*aux);
    X = Word{a}.then(X);
  }
}

Extended extend(const NodeFamily& f) {
  Extended e;
  e.W = f.W;
  e.X = f.X;
  Word g = *f.g;
  e.h = g.primitive_root();
  e.step = static_cast<Index>(g.size() / e.h.size());
  e.offset = e.step * f.m;
  push_letters(e.W, e.h, e.X, nullptr);
  while (e.X.starts_with(e.h)) {
    e.X = e.X.slice(e.h.size(), e.X.size());
    ++e.offset;
  }
  return e;
}

bool word_in(const Word& u, const Extended& e) {
  if (u.size() < e.W.size() + e.X.size()) return false;
  if (!u.starts_with(e.W) || !u.ends_with(e.X)) return false;
  const std::size_t middle = u.size() - e.W.size() - e.X.size();
  if (middle % e.h.size() != 0) return false;
  const auto k = static_cast<Index>(middle / e.h.size());
  if (k < e.offset || (k - e.offset) % e.step != 0) return false;
  return u.slice(e.W.size(), middle) == e.h.power(static_cast<std::size_t>(k));
}

}  // namespace

Word NodeFamily::instance(Index n) const {
  if (!g) return W.then(X);
  return W.then(g->power(static_cast<std::size_t>(m + n))).then(X);
}

std::string NodeFamily::to_string() const {
  std::ostringstream os;
  os << '{' << "X=" << X.to_string();
  if (g) os << " g=" << g->to_string() << "^(n>=" << m << ')';
  os << " W=" << W.to_string() << '}';
  return os.str();
}

NodeFamily canonical(const NodeFamily& f) {
  if (!f.g) return f;
  NodeFamily out = f;
  Word g = *f.g;
  push_letters(out.W, g, out.X, nullptr);
  while (out.X.starts_with(g)) {
    out.X = out.X.slice(g.size(), out.X.size());
    ++out.m;
  }
  out.g = g;
  return out;
}

bool family_subset(const NodeFamily& sub, const NodeFamily& super) {
  if (!super.g) return !sub.g && sub.instance() == super.instance();
  const Extended sup = extend(super);
  if (!sub.g) return word_in(sub.instance(), sup);
  const Extended s = extend(sub);
  if (s.W != sup.W || s.h != sup.h || s.X != sup.X) return false;
  return s.step % sup.step == 0 && s.offset >= sup.offset && (s.offset - sup.offset) % sup.step == 0;
}

AGTree::AGTree(std::size_t letters) : letters_(letters) {
  if (letters == 0) throw DimensionError("AGTree: empty alphabet");
  nodes_.push_back(AGNode{});
}

std::vector<Index> AGTree::expand_sibling(Index node) {
  const AGNode parent = this->node(node);
  if (!parent.is_leaf()) throw Error("expand_sibling: node already expanded");
  if (parent.covered) throw Error("expand_sibling: node is covered");
  std::vector<Index> out;
  for (std::size_t j = 0; j < letters_; ++j) {
    AGNode child;
    child.family = parent.family;
    child.family.X = child.family.X.then(static_cast<int>(j));
    child.parent = node;
    child.edge = EdgeKind::sibling;
    child.letter = static_cast<int>(j);
    out.push_back(add_raw(std::move(child)));
  }
  return out;
}

Index AGTree::expand_generator(Index node, const Word& g, double rho_g) {
  const AGNode parent = this->node(node);
  if (g.empty()) throw Error("expand_generator: empty generator word");
  for (int l : g)
    if (l < 0 || static_cast<std::size_t>(l) >= letters_)
      throw DimensionError("expand_generator: generator letter out of range");
  if (!(rho_g <= 1 + kGeneratorRadiusTol))
    throw Error("expand_generator: generator " + g.to_string() + " has spectral radius above one");
  if (parent.covered) throw Error("expand_generator: node is covered");
  for (Index c : parent.children)
    if (this->node(c).edge != EdgeKind::generator)
      throw Error("expand_generator: node already has sibling children");
  AGNode child;
  child.parent = node;
  child.edge = EdgeKind::generator;
  child.generator = g;
  if (!parent.family.g) {
    child.family.W = parent.family.W.then(parent.family.X);
    child.family.g = g;
    child.family.m = 0;
  } else if (parent.family.X.empty() && *parent.family.g == g) {
    child.family = parent.family;
  } else {
    throw Error("expand_generator: nested generator cores are not supported");
  }
  return add_raw(std::move(child));
}

bool AGTree::detect_covered(Index leaf) const {
  const AGNode& n = node(leaf);
  if (!n.is_leaf()) return false;
  for (Index a = n.parent; a >= 0; a = node(a).parent)
    if (family_subset(n.family, node(a).family)) return true;
  return false;
}

bool AGTree::mark_covered(Index leaf) {
  const bool c = detect_covered(leaf);
  nodes_[static_cast<std::size_t>(leaf)].covered = c;
  return c;
}

std::vector<Index> AGTree::leafage() const {
  std::vector<Index> out;
  std::vector<Index> stack{root()};
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    const AGNode& n = node(i);
    if (n.is_leaf()) {
      if (!n.covered) out.push_back(i);
      continue;
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<NodeFamily> AGTree::leafage_families() const {
  std::vector<NodeFamily> out;
  for (Index i : leafage()) out.push_back(node(i).family);
  return out;
}

Index AGTree::add_raw(AGNode node) {
  const auto id = static_cast<Index>(nodes_.size());
  if (node.parent >= 0) {
    if (node.parent >= id) throw Error("AGTree: parent must precede child");
    nodes_[static_cast<std::size_t>(node.parent)].children.push_back(id);
  }
  nodes_.push_back(std::move(node));
  return id;
}

std::optional<std::string> AGTree::validate(const std::map<Word, double>* radii) const {
  auto fail = [](Index i, const std::string& what) {
    return std::optional<std::string>("node " + std::to_string(i) + ": " + what);
  };
  if (nodes_.empty()) return std::optional<std::string>("tree has no root");
  const AGNode& r = nodes_[0];
  if (r.parent != -1 || r.edge != EdgeKind::root || r.family != NodeFamily{})
    return fail(0, "root must be {I}");
  for (Index i = 0; i < size(); ++i) {
    const AGNode& n = node(i);
    if (i > 0) {
      if (n.parent < 0 || n.parent >= i) return fail(i, "invalid parent");
      const AGNode& p = node(n.parent);
      if (std::count(p.children.begin(), p.children.end(), i) != 1)
        return fail(i, "not listed among its parent's children");
      if (n.edge == EdgeKind::sibling) {
        if (n.letter < 0 || static_cast<std::size_t>(n.letter) >= letters_) return fail(i, "letter out of range");
        NodeFamily expect = p.family;
        expect.X = expect.X.then(n.letter);
        if (n.family != expect) return fail(i, "sibling family does not extend its parent");
      } else if (n.edge == EdgeKind::generator) {
        if (n.generator.empty()) return fail(i, "empty generator");
        for (int l : n.generator)
          if (l < 0 || static_cast<std::size_t>(l) >= letters_) return fail(i, "generator letter out of range");
        NodeFamily expect;
        if (!p.family.g) {
          expect.W = p.family.W.then(p.family.X);
          expect.g = n.generator;
        } else if (p.family.X.empty() && *p.family.g == n.generator) {
          expect = p.family;
        } else {
          return fail(i, "nested generator core");
        }
        if (n.family != expect) return fail(i, "generator family does not match its parent");
        if (radii) {
          const auto it = radii->find(n.generator);
          if (it == radii->end()) return fail(i, "generator " + n.generator.to_string() + " not in G");
          if (!(it->second <= 1 + kGeneratorRadiusTol)) return fail(i, "generator with spectral radius above one");
        }
        if (n.is_leaf()) return fail(i, "generator node is a leaf");
      } else {
        return fail(i, "non-root node with root edge");
      }
    }
    if (!n.children.empty()) {
      const EdgeKind kind = node(n.children.front()).edge;
      for (Index c : n.children) {
        if (c <= i || c >= size()) return fail(i, "invalid child index");
        if (node(c).parent != i) return fail(i, "child does not point back");
        if (node(c).edge != kind) return fail(i, "mixes sibling and generator children");
      }
      if (kind == EdgeKind::sibling) {
        if (n.children.size() != letters_) return fail(i, "needs exactly J sibling children");
        std::vector<bool> seen(letters_, false);
        for (Index c : n.children) {
          const auto l = static_cast<std::size_t>(node(c).letter);
          if (l >= letters_ || seen[l]) return fail(i, "sibling letters are not 1..J");
          seen[l] = true;
        }
      }
      if (n.covered) return fail(i, "covered node has children");
    }
    if (n.covered && !detect_covered(i)) return fail(i, "covered mark not justified");
  }
  return std::nullopt;
}

}  // namespace jsr
