#include "jsr/prover.hpp"

#include "jsr/parallel.hpp"
#include "jsr/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>

namespace jsr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

unsigned threads_for(const ProverConfig& cfg) { return cfg.threads > 0 ? cfg.threads : thread_count(); }

// Candidate words usable as generators: rho(A_g) <= 1 and a spectral split exists.
struct Generators {
  std::vector<Word> words;
  std::map<Word, double> radii;

  const Word* match(const Word& accumulated) const {
    for (const auto& g : words)
      if (accumulated.ends_with(g)) return &g;
    return nullptr;
  }
};

Generators usable_generators(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates) {
  Generators out;
  for (const auto& c : candidates) {
    const Matrix pi = word_product(family, c.word);
    const double rho = spectral_radius(pi);
    if (!(rho <= 1 + kGeneratorRadiusTol)) continue;
    try {
      (void)spectral_split(pi);
    } catch (const Error&) {
      continue;
    }
    out.words.push_back(c.word);
    out.radii[c.word] = rho;
  }
  return out;
}

double max_matrix_norm(const MatrixFamily& family, const NormChoice& norm) {
  double best = 0.0;
  for (const auto& a : family.matrices()) best = std::max(best, norm.matrix_norm(a));
  return best;
}

// Nested subtree construction plan, grafted into an AGTree once it closes.
struct Plan {
  enum class Kind { leaf, covered, siblings, generator } kind = Kind::leaf;
  Word g;
  std::vector<Plan> kids;
};

void graft(AGTree& tree, Index node, const Plan& plan, const std::map<Word, double>& radii) {
  switch (plan.kind) {
    case Plan::Kind::leaf:
      return;
    case Plan::Kind::covered:
      if (!tree.mark_covered(node)) throw Error("graft: planned coverage does not hold");
      return;
    case Plan::Kind::siblings: {
      const auto ids = tree.expand_sibling(node);
      for (std::size_t j = 0; j < ids.size(); ++j) graft(tree, ids[j], plan.kids[j], radii);
      return;
    }
    case Plan::Kind::generator: {
      const Index gid = tree.expand_generator(node, plan.g, radii.at(plan.g));
      graft(tree, gid, plan.kids.front(), radii);
      return;
    }
  }
}

struct PolyVertex {
  Vector v;
  VertexOrigin origin;
};

struct VertexOutcome {
  Plan plan;
  std::vector<int> failed;  // letters whose image could not be closed
};

class PolytopeEngine {
 public:
  PolytopeEngine(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates, const ProverConfig& cfg,
                 bool ipa)
      : A_(family), candidates_(candidates), cfg_(cfg), ipa_(ipa), leaf_cfg_(replay_leaf_config()) {
    depth_ = ipa ? 1 : std::max<Index>(cfg.subtree_depth, 1);
    use_generators_ = !ipa && !cfg.finite_subtrees_only;
    if (use_generators_) gens_ = usable_generators(family, candidates);
    for (const auto& g : gens_.words) splits_.emplace(g, spectral_split(word_product(family, g)));
  }

  Certificate run(SweepTrace* trace);

 private:
  void add_roots();
  double norm_of(const Vector& x) const { return minkowski_norm(P_, x); }
  bool accepted(double value) const { return value <= 1.0 - cfg_.strict_margin; }
  bool cycle_image(const PolyVertex& u, const Word& word, const Vector& image) const;
  double leaf_value(const PolyVertex& u, const NodeFamily& f) const;
  std::optional<Plan> close(const PolyVertex& u, const NodeFamily& f, Index depth,
                            std::vector<NodeFamily>& ancestors) const;
  std::optional<Plan> close_generator(const PolyVertex& u, const NodeFamily& f, const Word& g, Index depth,
                                      std::vector<NodeFamily>& ancestors) const;
  VertexOutcome process(const PolyVertex& u) const;
  void add_vertex(const Vector& v, VertexOrigin origin);

  const MatrixFamily& A_;
  const std::vector<SmpCandidate>& candidates_;
  const ProverConfig& cfg_;
  bool ipa_;
  LeafConfig leaf_cfg_;
  Index depth_ = 1;
  bool use_generators_ = false;
  Generators gens_;
  std::map<Word, SpectralSplit> splits_;

  std::vector<RootRecord> roots_;
  std::vector<Index> root_vertex_;  // vertex index of each root
  std::vector<PolyVertex> verts_;
  SymPolytope P_;
  std::optional<SandwichConstants> sc_;
  std::vector<std::string> notes_;
};

void PolytopeEngine::add_vertex(const Vector& v, VertexOrigin origin) {
  verts_.push_back({v, std::move(origin)});
  P_.add_vertex(v);
}

void PolytopeEngine::add_roots() {
  P_ = SymPolytope(A_.dim());
  const double top = candidates_.front().averaged_spectral_radius;
  const double tie = top * (1 - kCoCandidateTol);
  const bool all = !ipa_ && cfg_.all_leading_roots;
  for (std::size_t c = 0; c < candidates_.size(); ++c) {
    if (c > 0 && (!all || candidates_[c].averaged_spectral_radius < tie)) break;
    const auto pairs = leading_eigenpairs(word_product(A_, candidates_[c].word));
    if (pairs.size() > 1 && c == 0)
      notes_.push_back("top candidate has " + std::to_string(pairs.size()) +
                       " leading eigenvalues; the invariant polytope algorithm may not terminate");
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const bool primary = c == 0 && k == 0;
      if (!primary && !all) break;
      const double scale = primary ? 1.0 : 1.0 - cfg_.strict_margin;
      const CVector& v = pairs[k].vector;
      for (const char* part : {"re", "im"}) {
        const Vector x = scale * (std::string(part) == "re" ? Vector(v.real()) : Vector(v.imag()));
        if (x.norm() <= 1e-12) continue;
        RootRecord r{static_cast<Index>(c), pairs[k].value, part, scale};
        roots_.push_back(r);
        VertexOrigin o;
        o.root = static_cast<Index>(roots_.size() - 1);
        root_vertex_.push_back(static_cast<Index>(verts_.size()));
        add_vertex(x, o);
      }
    }
  }
}

// Image of a root vertex under a power of its candidate that reproduces a root
// vertex of the same candidate up to sign.
bool PolytopeEngine::cycle_image(const PolyVertex& u, const Word& word, const Vector& image) const {
  const RootRecord& r = roots_[static_cast<std::size_t>(u.origin.root)];
  if (word.empty() || !word.is_power_of(candidates_[static_cast<std::size_t>(r.candidate)].word)) return false;
  for (std::size_t k = 0; k < roots_.size(); ++k) {
    if (roots_[k].candidate != r.candidate) continue;
    const Vector& t = verts_[static_cast<std::size_t>(root_vertex_[k])].v;
    const double tol = 1e-9 * t.norm();
    if ((image - t).norm() <= tol || (image + t).norm() <= tol) return true;
  }
  return false;
}

double PolytopeEngine::leaf_value(const PolyVertex& u, const NodeFamily& f) const {
  if (!f.has_core()) {
    const Vector image = word_product(A_, f.instance()) * u.v;
    if (cycle_image(u, u.origin.word.then(f.instance()), image)) return 0.0;
    return norm_of(image);
  }
  if (!sc_) return kInfinity;
  const Matrix X = word_product(A_, f.X);
  const Matrix B = word_product(A_, f.g->power(static_cast<std::size_t>(f.m))) * word_product(A_, f.W);
  const Matrix pi = word_product(A_, *f.g);
  try {
    return certify_leaf_in_polytope(X, pi, splits_.at(*f.g), B * u.v, P_, *sc_, leaf_cfg_).bound;
  } catch (const Error&) {
    return kInfinity;
  }
}

std::optional<Plan> PolytopeEngine::close(const PolyVertex& u, const NodeFamily& f, Index depth,
                                          std::vector<NodeFamily>& ancestors) const {
  for (const auto& a : ancestors)
    if (family_subset(f, a)) return Plan{Plan::Kind::covered, {}, {}};
  if (accepted(leaf_value(u, f))) return Plan{};
  if (depth >= depth_) return std::nullopt;
  if (use_generators_ && !f.has_core())
    if (const Word* g = gens_.match(u.origin.word.then(f.instance())))
      if (auto plan = close_generator(u, f, *g, depth, ancestors)) return plan;
  Plan plan{Plan::Kind::siblings, {}, {}};
  ancestors.push_back(f);
  for (std::size_t j = 0; j < A_.size(); ++j) {
    NodeFamily child = f;
    child.X = child.X.then(static_cast<int>(j));
    auto kid = close(u, child, depth + 1, ancestors);
    if (!kid) {
      ancestors.pop_back();
      return std::nullopt;
    }
    plan.kids.push_back(std::move(*kid));
  }
  ancestors.pop_back();
  return plan;
}

std::optional<Plan> PolytopeEngine::close_generator(const PolyVertex& u, const NodeFamily& f, const Word& g,
                                                    Index depth, std::vector<NodeFamily>& ancestors) const {
  NodeFamily gen;
  gen.W = f.W.then(f.X);
  gen.g = g;
  Plan siblings{Plan::Kind::siblings, {}, {}};
  ancestors.push_back(f);
  ancestors.push_back(gen);
  bool ok = true;
  for (std::size_t j = 0; j < A_.size() && ok; ++j) {
    NodeFamily child = gen;
    child.X = Word{static_cast<int>(j)};
    auto kid = close(u, child, depth + 1, ancestors);
    if (kid) siblings.kids.push_back(std::move(*kid));
    else ok = false;
  }
  ancestors.resize(ancestors.size() - 2);
  if (!ok) return std::nullopt;
  return Plan{Plan::Kind::generator, g, {std::move(siblings)}};
}

VertexOutcome PolytopeEngine::process(const PolyVertex& u) const {
  VertexOutcome out;
  std::vector<NodeFamily> ancestors;
  const NodeFamily root;
  if (use_generators_ && u.origin.root >= 0 && !u.origin.word.empty())
    if (const Word* g = gens_.match(u.origin.word))
      if (auto plan = close_generator(u, root, *g, 0, ancestors)) {
        out.plan = std::move(*plan);
        return out;
      }
  out.plan.kind = Plan::Kind::siblings;
  ancestors.push_back(root);
  for (std::size_t j = 0; j < A_.size(); ++j) {
    NodeFamily child;
    child.X = Word{static_cast<int>(j)};
    auto kid = close(u, child, 1, ancestors);
    if (kid) {
      out.plan.kids.push_back(std::move(*kid));
    } else {
      out.plan.kids.push_back(Plan{});
      out.failed.push_back(static_cast<int>(j));
    }
  }
  return out;
}

Certificate PolytopeEngine::run(SweepTrace* trace) {
  const auto t0 = Clock::now();
  Certificate cert;
  cert.family = A_;
  cert.mode = ipa_ ? Mode::ipa : Mode::hybrid;
  cert.candidates = candidates_;
  cert.norm = "polytope";
  cert.strict_margin = cfg_.strict_margin;

  add_roots();
  std::vector<VertexOutcome> outcomes(verts_.size());
  std::vector<Index> fresh(verts_.size());
  for (std::size_t i = 0; i < fresh.size(); ++i) fresh[i] = static_cast<Index>(i);
  bool capped = false;
  Index sweeps = 0;
  while (!fresh.empty()) {
    if (sweeps >= cfg_.max_sweeps) {
      capped = true;
      notes_.push_back("sweep cap reached");
      break;
    }
    ++sweeps;
    sc_.reset();
    if (use_generators_ && P_.spans()) sc_ = sandwich_constants(P_);
    std::vector<VertexOutcome> results(fresh.size());
    parallel_for(
        fresh.size(), [&](std::size_t i) { results[i] = process(verts_[static_cast<std::size_t>(fresh[i])]); },
        threads_for(cfg_));
    // Deterministic merge in vertex order against the growing polytope.
    std::vector<Index> next;
    for (std::size_t i = 0; i < fresh.size() && !capped; ++i) {
      const Index ui = fresh[i];
      for (int j : results[i].failed) {
        const PolyVertex u = verts_[static_cast<std::size_t>(ui)];
        const Vector image = A_[static_cast<std::size_t>(j)] * u.v;
        if (accepted(norm_of(image))) continue;
        if (static_cast<Index>(verts_.size()) >= cfg_.max_vertices) {
          capped = true;
          notes_.push_back("vertex cap " + std::to_string(cfg_.max_vertices) + " reached");
          break;
        }
        VertexOrigin o;
        o.root = u.origin.root;
        o.parent = ui;
        o.word = u.origin.word.then(j);
        add_vertex(image, o);
        outcomes.emplace_back();
        next.push_back(static_cast<Index>(verts_.size() - 1));
      }
      outcomes[static_cast<std::size_t>(ui)] = std::move(results[i]);
    }
    if (trace) trace->vertex_counts.push_back(static_cast<Index>(verts_.size()));
    if (capped) break;
    fresh = std::move(next);
  }
  cert.sweeps = sweeps;

  cert.vertices = P_.vertices();
  for (const auto& v : verts_) cert.origins.push_back(v.origin);
  cert.roots = roots_;
  if (trace) trace->final_vertices = P_.vertices();

  if (!P_.spans()) notes_.push_back("vertices do not span R^s");
  const bool closed = !capped && P_.spans();
  if (P_.spans()) {
    cert.sandwich = sandwich_constants(P_);
    const NormChoice nc{&P_, &*cert.sandwich};
    cert.ub = max_matrix_norm(A_, nc);
  }
  if (closed) {
    // Final trees and leaf bounds against the final polytope.
    cert.trees.resize(verts_.size());
    for (std::size_t i = 0; i < verts_.size(); ++i) {
      cert.trees[i].vertex = static_cast<Index>(i);
      cert.trees[i].tree = AGTree(A_.size());
      graft(cert.trees[i].tree, 0, outcomes[i].plan, gens_.radii);
    }
    std::vector<std::vector<LeafRecord>> per_tree(verts_.size());
    const NormChoice nc{&P_, &*cert.sandwich};
    parallel_for(
        verts_.size(),
        [&](std::size_t i) {
          const AGTree& t = cert.trees[i].tree;
          for (Index n : t.leafage()) {
            const auto ev = evaluate_leaf(t.node(n).family, A_, &verts_[i].v, nc, leaf_cfg_);
            per_tree[i].push_back({static_cast<Index>(i), n, ev.bound, ev.method});
          }
        },
        threads_for(cfg_));
    bool all_ok = true;
    for (auto& leaves : per_tree)
      for (auto& l : leaves) {
        if (!(l.bound <= 1.0 + kReplayTol)) all_ok = false;
        cert.leaves.push_back(std::move(l));
      }
    if (all_ok) {
      cert.status = "certified";
      cert.ub = 1.0;
    } else {
      notes_.push_back("a leaf bound exceeds one against the final polytope");
    }
  }
  cert.lb = candidates_.front().averaged_spectral_radius;
  cert.notes = notes_;
  cert.seconds = seconds_since(t0);
  return cert;
}

Index depth_of(const AGTree& t, Index n) {
  Index d = 0;
  for (Index p = t.node(n).parent; p >= 0; p = t.node(p).parent) ++d;
  return d;
}

Certificate finish_scalar(const MatrixFamily& family) {
  Certificate cert;
  cert.family = family;
  cert.mode = Mode::scalar;
  cert.norm = "2-norm";
  double m = 0.0;
  for (const auto& a : family.matrices()) m = std::max(m, std::abs(a(0, 0)));
  cert.lb = cert.ub = m;
  cert.status = "certified";
  return cert;
}

}  // namespace

Certificate prove_polytope(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                           const ProverConfig& cfg, bool ipa, SweepTrace* trace) {
  if (candidates.empty()) throw Error("prove: no candidates");
  PolytopeEngine engine(family, candidates, cfg, ipa);
  return engine.run(trace);
}

Certificate prove_ipa(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                      const ProverConfig& cfg) {
  return prove_polytope(family, candidates, cfg, true);
}

Certificate prove_hybrid(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                         const ProverConfig& cfg) {
  return prove_polytope(family, candidates, cfg, false);
}

Certificate prove_tree(const MatrixFamily& family, const std::vector<SmpCandidate>& candidates,
                       const ProverConfig& cfg) {
  const auto t0 = Clock::now();
  Certificate cert;
  cert.family = family;
  cert.mode = Mode::tree;
  cert.candidates = candidates;
  cert.strict_margin = cfg.strict_margin;
  const LeafConfig leaf_cfg = replay_leaf_config();

  std::optional<SymPolytope> P;
  if (cfg.tree_polytope_norm) {
    if (!cfg.tree_polytope || !cfg.tree_polytope->spans())
      throw Error("prove_tree: polytope norm requested without a spanning polytope");
    P = *cfg.tree_polytope;
    cert.sandwich = sandwich_constants(*P);
    cert.norm = "polytope";
    cert.vertices = P->vertices();
  } else {
    cert.norm = "2-norm";
  }
  const NormChoice nc = P ? NormChoice{&*P, &*cert.sandwich} : NormChoice{};
  const Generators gens = usable_generators(family, candidates);

  AGTree tree(family.size());
  std::vector<double> bound(1, kInfinity);
  std::vector<LeafEvaluation> evals(1);
  auto accepted = [&](double b) { return b <= 1.0 - cfg.strict_margin; };
  std::vector<Index> open{0};
  bool success = false;
  while (true) {
    if (open.empty()) {
      success = true;
      break;
    }
    const auto it = std::max_element(open.begin(), open.end(), [&](Index a, Index b) {
      return bound[static_cast<std::size_t>(a)] < bound[static_cast<std::size_t>(b)] ||
             (bound[static_cast<std::size_t>(a)] == bound[static_cast<std::size_t>(b)] && a > b);
    });
    const Index node = *it;
    if (depth_of(tree, node) >= cfg.max_depth) {
      cert.notes.push_back("depth cap reached at " + tree.node(node).family.to_string());
      break;
    }
    if (tree.size() + static_cast<Index>(2 * family.size()) > cfg.max_tree_nodes) {
      cert.notes.push_back("node cap reached");
      break;
    }
    open.erase(it);
    const NodeFamily f = tree.node(node).family;
    std::vector<Index> kids;
    const Word* g = f.has_core() ? nullptr : gens.match(f.instance());
    if (g) kids = tree.expand_sibling(tree.expand_generator(node, *g, gens.radii.at(*g)));
    else kids = tree.expand_sibling(node);
    bound.resize(static_cast<std::size_t>(tree.size()), kInfinity);
    evals.resize(static_cast<std::size_t>(tree.size()));
    std::vector<Index> todo;
    for (Index k : kids)
      if (!tree.mark_covered(k)) todo.push_back(k);
    parallel_for(
        todo.size(),
        [&](std::size_t i) {
          const Index k = todo[i];
          evals[static_cast<std::size_t>(k)] =
              evaluate_leaf(tree.node(k).family, family, nullptr, nc, leaf_cfg);
          bound[static_cast<std::size_t>(k)] = evals[static_cast<std::size_t>(k)].bound;
        },
        threads_for(cfg));
    for (Index k : todo)
      if (!accepted(bound[static_cast<std::size_t>(k)])) open.push_back(k);
  }
  cert.trees.push_back({-1, tree});
  cert.ub = max_matrix_norm(family, nc);
  if (success) {
    for (Index n : tree.leafage())
      cert.leaves.push_back({0, n, evals[static_cast<std::size_t>(n)].bound, evals[static_cast<std::size_t>(n)].method});
    cert.status = "certified";
    cert.ub = 1.0;
  }
  cert.lb = candidates.front().averaged_spectral_radius;
  cert.seconds = seconds_since(t0);
  return cert;
}

std::optional<InvariantSubspace> find_invariant_subspace(const MatrixFamily& family, double tol) {
  const Index s = family.dim();
  if (s <= 1) return std::nullopt;
  double scale = 0.0;
  for (const auto& a : family.matrices()) scale = std::max(scale, norm2(a));
  if (scale == 0.0) {
    InvariantSubspace out{Matrix::Identity(s, s), 1};
    return out;
  }

  // Orthonormal basis of the smallest invariant subspace containing x.
  auto orbit = [&](const std::vector<Matrix>& mats, const Vector& x) {
    Matrix Q(s, 0);
    std::vector<Vector> queue;
    auto push = [&](Vector y) {
      for (int pass = 0; pass < 2; ++pass) y -= Q * (Q.transpose() * y);
      const double n = y.norm();
      if (n <= tol * scale) return;
      Q.conservativeResize(s, Q.cols() + 1);
      Q.col(Q.cols() - 1) = y / n;
      queue.push_back(Q.col(Q.cols() - 1));
    };
    push(x / x.norm() * scale);
    while (!queue.empty() && Q.cols() < s) {
      const Vector y = queue.back();
      queue.pop_back();
      for (const auto& a : mats) {
        push(a * y);
        if (Q.cols() == s) break;
      }
    }
    return Q;
  };
  auto complete = [&](const Matrix& basis) {
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix Q = qr.householderQ() * Matrix::Identity(s, s);
    Q.leftCols(basis.cols()) = basis;
    // Re-orthonormalize the complement against the given basis.
    for (Index c = basis.cols(); c < s; ++c) {
      Vector y = Q.col(c);
      for (int pass = 0; pass < 2; ++pass) y -= Q.leftCols(c) * (Q.leftCols(c).transpose() * y);
      Q.col(c) = y.normalized();
    }
    return Q;
  };

  for (int transposed = 0; transposed < 2; ++transposed) {
    std::vector<Matrix> mats;
    Matrix C = Matrix::Zero(s, s);
    for (std::size_t j = 0; j < family.size(); ++j) {
      mats.push_back(transposed ? Matrix(family[j].transpose()) : family[j]);
      const double c = 0.5 + std::fmod(static_cast<double>(j + 1) * std::numbers::phi, 1.0);
      C += c * mats.back();
    }
    Eigen::ComplexEigenSolver<CMatrix> es(C.cast<Complex>());
    for (Index k = 0; k < s; ++k) {
      const CVector v = es.eigenvectors().col(k);
      for (const Vector& x : {Vector(v.real()), Vector(v.imag())}) {
        if (x.norm() <= 1e-8) continue;
        const Matrix Q = orbit(mats, x);
        if (Q.cols() >= s) continue;
        if (!transposed) return InvariantSubspace{complete(Q), Q.cols()};
        // Invariant for the transposes: its orthogonal complement is invariant.
        const Matrix full = complete(Q);
        Matrix perp(s, s);
        perp << full.rightCols(s - Q.cols()), Q;
        return InvariantSubspace{perp, s - Q.cols()};
      }
    }
  }
  return std::nullopt;
}

Certificate estimate_jsr(const MatrixFamily& family, const ProverConfig& cfg) {
  const auto t0 = Clock::now();
  if (family.size() == 0 || family.dim() == 0) throw DimensionError("estimate_jsr: empty family");
  if (family.dim() == 1) return finish_scalar(family);

  if (cfg.reduce)
    if (auto sub = find_invariant_subspace(family)) {
      Certificate cert;
      cert.family = family;
      cert.mode = Mode::reduced;
      cert.reduction_basis = sub->Q;
      const Index k = sub->dim, s = family.dim();
      cert.block_sizes = {k, s - k};
      std::vector<Matrix> top, bottom;
      for (const auto& a : family.matrices()) {
        const Matrix b = sub->Q.transpose() * a * sub->Q;
        top.push_back(b.topLeftCorner(k, k));
        bottom.push_back(b.bottomRightCorner(s - k, s - k));
      }
      cert.blocks.push_back(estimate_jsr(MatrixFamily(top), cfg));
      cert.blocks.push_back(estimate_jsr(MatrixFamily(bottom), cfg));
      cert.lb = std::max(cert.blocks[0].lb, cert.blocks[1].lb);
      cert.ub = std::max(cert.blocks[0].ub, cert.blocks[1].ub);
      cert.status = cert.blocks[0].certified() && cert.blocks[1].certified() ? "certified" : "inconclusive";
      cert.notes.push_back("reducible: JSR is the larger of the diagonal block JSRs");
      cert.seconds = seconds_since(t0);
      return cert;
    }

  const int max_len = cfg.max_len > 0 ? cfg.max_len : default_max_len(family.size());
  const CandidateSearch search = find_candidates(family, max_len, cfg.keep);
  if (search.lb == 0.0 || search.candidates.empty()) {
    Certificate cert;
    cert.family = family;
    cert.mode = cfg.mode;
    cert.lb = 0.0;
    cert.ub = search.ub;
    cert.notes.push_back("every product up to the search length has spectral radius zero");
    cert.seconds = seconds_since(t0);
    return cert;
  }
  const MatrixFamily normalized = normalize(family, search.candidates.front());
  const double lambda = normalized.scale() / family.scale();
  std::vector<SmpCandidate> cands = search.candidates;
  for (auto& c : cands) {
    c.averaged_spectral_radius /= lambda;
    c.normalized = true;
  }

  Certificate cert;
  switch (cfg.mode) {
    case Mode::ipa:
      cert = prove_ipa(normalized, cands, cfg);
      break;
    case Mode::hybrid:
      cert = prove_hybrid(normalized, cands, cfg);
      break;
    case Mode::tree:
      cert = prove_tree(normalized, cands, cfg);
      break;
    case Mode::tree_warmstart: {
      ProverConfig warm = cfg;
      warm.max_sweeps = cfg.warmstart_sweeps;
      const Certificate ws = prove_ipa(normalized, cands, warm);
      Matrix V = ws.vertices;
      SymPolytope P(V);
      if (!P.spans()) {
        // Complete with the orthogonal complement of span V.
        Eigen::JacobiSVD<Matrix> svd(V, Eigen::ComputeFullU);
        const Index r = P.rank();
        for (Index c = r; c < V.rows(); ++c) P.add_vertex(svd.matrixU().col(c));
      }
      ProverConfig tc = cfg;
      tc.tree_polytope_norm = true;
      tc.tree_polytope = P;
      cert = prove_tree(normalized, cands, tc);
      cert.mode = Mode::tree_warmstart;
      break;
    }
    default:
      throw Error("estimate_jsr: unsupported mode " + to_string(cfg.mode));
  }
  cert.family = family;
  cert.scale = lambda;
  // Certified: both bounds are rho(A_g)^(1/|g|); report the one value so
  // rounding in two evaluations cannot order them the wrong way.
  cert.lb = cert.certified() ? lambda : search.lb;
  cert.ub = cert.certified() ? lambda : std::min(search.ub, lambda * cert.ub);
  cert.seconds = seconds_since(t0);
  return cert;
}

}  // namespace jsr
