#include "jsr/certificate.hpp"

#include "jsr/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace jsr {

using nlohmann::json;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::tree: return "tree";
    case Mode::ipa: return "ipa";
    case Mode::hybrid: return "hybrid";
    case Mode::tree_warmstart: return "tree+warmstart";
    case Mode::scalar: return "scalar";
    case Mode::reduced: return "reduced";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::tree, Mode::ipa, Mode::hybrid, Mode::tree_warmstart, Mode::scalar, Mode::reduced})
    if (to_string(m) == text) return m;
  throw Error("unknown mode '" + text + "'");
}

MatrixFamily Certificate::normalized() const {
  if (scale == 1.0) return family;
  std::vector<Matrix> m;
  for (const auto& a : family.matrices()) m.push_back(a / scale);
  return MatrixFamily(std::move(m), scale);
}

LeafEvaluation evaluate_leaf(const NodeFamily& leaf, const MatrixFamily& family, const Vector* vertex,
                             const NormChoice& norm, const LeafConfig& cfg) {
  try {
    if (!leaf.has_core()) {
      const Matrix L = word_product(family, leaf.instance());
      if (!vertex) return {norm.matrix_norm(L), "matrix-norm"};
      const Vector x = L * *vertex;
      return {norm.is_two_norm() ? x.norm() : minkowski_norm(*norm.polytope, x), "norm"};
    }
    const Matrix pi = word_product(family, *leaf.g);
    const Matrix X = word_product(family, leaf.X);
    const Matrix B = word_product(family, leaf.g->power(static_cast<std::size_t>(leaf.m))) *
                     word_product(family, leaf.W);
    const SpectralSplit split = spectral_split(pi);
    auto n2 = [](const Matrix& m) { return norm2(m); };
    if (vertex) {
      const LeafVerdict v = norm.is_two_norm() ? certify_leaf(X, pi, split, B * *vertex, n2, 1.0, cfg)
                                               : certify_leaf_in_polytope(X, pi, split, B * *vertex, *norm.polytope,
                                                                          *norm.sandwich, cfg);
      return {v.bound, "leaf:" + v.method};
    }
    if (norm.is_two_norm()) {
      const LeafVerdict v = certify_leaf(X, pi, split, B, n2, 1.0, cfg);
      return {v.bound, "leaf:" + v.method};
    }
    LeafEvaluation out{0.0, ""};
    for (Index i = 0; i < norm.polytope->size(); ++i) {
      const LeafVerdict v = certify_leaf_in_polytope(X, pi, split, B * norm.polytope->vertices().col(i),
                                                     *norm.polytope, *norm.sandwich, cfg);
      if (v.bound >= out.bound) out = {v.bound, "leaf:" + v.method};
    }
    return out;
  } catch (const Error& e) {
    return {kInfinity, std::string("failed: ") + e.what()};
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;  // +infinity; the only non-finite value certificates carry
}

json word_json(const Word& w) { return w.one_based(); }

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

std::string edge_label(const AGNode& n) {
  switch (n.edge) {
    case EdgeKind::root: return "root";
    case EdgeKind::sibling: return "sib:" + std::to_string(n.letter + 1);
    case EdgeKind::generator: return "gen:" + n.generator.to_string();
  }
  return "";
}

json cert_json(const Certificate& c) {
  json j;
  j["format"] = "jsr-certificate-1";
  json mats = json::array();
  for (const auto& a : c.family.matrices()) {
    json flat = json::array();
    for (Index r = 0; r < a.rows(); ++r)
      for (Index k = 0; k < a.cols(); ++k) flat.push_back(a(r, k));
    mats.push_back(flat);
  }
  j["family"] = {{"dim", c.family.dim()}, {"count", c.family.size()}, {"matrices", mats}, {"scale", c.scale}};
  j["mode"] = to_string(c.mode);
  json cands = json::array();
  for (const auto& s : c.candidates) cands.push_back({{"word", word_json(s.word)}, {"rho", s.averaged_spectral_radius}});
  j["candidates"] = cands;
  j["norm"] = c.norm;

  json verts = json::array();
  for (Index i = 0; i < c.vertices.cols(); ++i) {
    json v = json::array();
    for (Index r = 0; r < c.vertices.rows(); ++r) v.push_back(c.vertices(r, i));
    verts.push_back(v);
  }
  json origins = json::array();
  for (const auto& o : c.origins) origins.push_back({{"root", o.root}, {"parent", o.parent}, {"word", word_json(o.word)}});
  json poly = {{"vertices", verts}, {"origins", origins}};
  if (c.sandwich) poly["sandwich"] = {{"r", c.sandwich->r}, {"R", c.sandwich->R}, {"method", c.sandwich->method}};
  j["polytope"] = poly;

  json roots = json::array();
  for (const auto& r : c.roots)
    roots.push_back({{"candidate", r.candidate},
                     {"eigenvalue", {r.eigenvalue.real(), r.eigenvalue.imag()}},
                     {"part", r.part},
                     {"scale", r.scale}});
  j["roots"] = roots;

  json trees = json::array();
  for (const auto& t : c.trees) {
    json nodes = json::array();
    for (const auto& n : t.tree.nodes()) {
      nodes.push_back({{"parent", n.parent},
                       {"edge", edge_label(n)},
                       {"X", word_json(n.family.X)},
                       {"g", n.family.g ? word_json(*n.family.g) : json(nullptr)},
                       {"m", n.family.m},
                       {"W", word_json(n.family.W)},
                       {"covered", n.covered}});
    }
    trees.push_back({{"vertex", t.vertex}, {"letters", t.tree.letters()}, {"nodes", nodes}});
  }
  j["trees"] = trees;

  json leaves = json::array();
  for (const auto& l : c.leaves) {
    std::string desc;
    if (l.tree >= 0 && static_cast<std::size_t>(l.tree) < c.trees.size() && l.node >= 0 &&
        l.node < c.trees[static_cast<std::size_t>(l.tree)].tree.size())
      desc = c.trees[static_cast<std::size_t>(l.tree)].tree.node(l.node).family.to_string();
    leaves.push_back({{"tree", l.tree}, {"node", l.node}, {"leaf", desc}, {"bound", number(l.bound)}, {"method", l.method}});
  }
  j["leaf_verdicts"] = leaves;

  if (c.reduction_basis) {
    json blocks = json::array();
    for (const auto& b : c.blocks) blocks.push_back(cert_json(b));
    j["reduction"] = {{"basis", matrix_rows(*c.reduction_basis)}, {"block_sizes", c.block_sizes}, {"blocks", blocks}};
  }
  j["result"] = {{"lb", number(c.lb)}, {"ub", number(c.ub)}, {"status", c.status}};
  j["notes"] = c.notes;
  j["stats"] = {{"sweeps", c.sweeps}, {"seconds", c.seconds}, {"strict_margin", c.strict_margin}};
  return j;
}

// Field access with path diagnostics.
const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw CertificateParseError(path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw CertificateParseError(path + "." + key + ": missing");
  return *it;
}

double get_double(const json& j, const std::string& path) {
  if (j.is_null()) return kInfinity;
  if (!j.is_number()) throw CertificateParseError(path + ": expected a number");
  return j.get<double>();
}

Index get_index(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw CertificateParseError(path + ": expected an integer");
  return j.get<Index>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw CertificateParseError(path + ": expected a string");
  return j.get<std::string>();
}

Word get_word(const json& j, const std::string& path, std::size_t letters) {
  if (!j.is_array()) throw CertificateParseError(path + ": expected a word");
  std::vector<int> l;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw CertificateParseError(path + ": letters must be integers");
    const int v = x.get<int>();
    if (v < 1 || (letters > 0 && static_cast<std::size_t>(v) > letters))
      throw CertificateParseError(path + ": letter " + std::to_string(v) + " out of range");
    l.push_back(v);
  }
  return Word::from_one_based(l);
}

Matrix get_rows(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw CertificateParseError(path + ": expected a matrix");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw CertificateParseError(path + ": ragged rows");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = get_double(row[static_cast<std::size_t>(c)], path + "[" + std::to_string(r) + "]");
  }
  return m;
}

AGTree parse_tree(const json& j, const std::string& p) {
  const auto letters = static_cast<std::size_t>(get_index(field(j, "letters", p), p + ".letters"));
  if (letters == 0) throw CertificateParseError(p + ".letters: must be positive");
  AGTree tree(letters);
  const json& nodes = field(j, "nodes", p);
  if (!nodes.is_array() || nodes.empty()) throw CertificateParseError(p + ".nodes: expected a non-empty array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string np = p + ".nodes[" + std::to_string(i) + "]";
    const json& n = nodes[i];
    AGNode node;
    node.parent = get_index(field(n, "parent", np), np + ".parent");
    node.family.X = get_word(field(n, "X", np), np + ".X", letters);
    node.family.W = get_word(field(n, "W", np), np + ".W", letters);
    const json& g = field(n, "g", np);
    if (!g.is_null()) node.family.g = get_word(g, np + ".g", letters);
    node.family.m = get_index(field(n, "m", np), np + ".m");
    const json& cov = field(n, "covered", np);
    if (!cov.is_boolean()) throw CertificateParseError(np + ".covered: expected a boolean");
    node.covered = cov.get<bool>();
    const std::string edge = get_string(field(n, "edge", np), np + ".edge");
    if (edge == "root") {
      node.edge = EdgeKind::root;
    } else if (edge.rfind("sib:", 0) == 0) {
      node.edge = EdgeKind::sibling;
      try {
        node.letter = std::stoi(edge.substr(4)) - 1;
      } catch (const std::exception&) {
        throw CertificateParseError(np + ".edge: bad sibling label '" + edge + "'");
      }
    } else if (edge.rfind("gen:", 0) == 0) {
      node.edge = EdgeKind::generator;
      try {
        const json w = json::parse(edge.substr(4));
        node.generator = get_word(w, np + ".edge", letters);
      } catch (const json::exception&) {
        throw CertificateParseError(np + ".edge: bad generator label '" + edge + "'");
      }
    } else {
      throw CertificateParseError(np + ".edge: unknown edge '" + edge + "'");
    }
    if (i == 0) {
      if (node.parent != -1 || node.edge != EdgeKind::root || node.family != NodeFamily{} || node.covered)
        throw CertificateParseError(np + ": the first node must be the root {I}");
      continue;
    }
    if (node.parent < 0 || node.parent >= static_cast<Index>(i))
      throw CertificateParseError(np + ".parent: must reference an earlier node");
    tree.add_raw(std::move(node));
  }
  return tree;
}

Certificate parse_cert(const json& j, const std::string& p) {
  Certificate c;
  if (get_string(field(j, "format", p), p + ".format") != "jsr-certificate-1")
    throw CertificateParseError(p + ".format: unsupported certificate format");
  const json& fam = field(j, "family", p);
  const Index dim = get_index(field(fam, "dim", p + ".family"), p + ".family.dim");
  const Index count = get_index(field(fam, "count", p + ".family"), p + ".family.count");
  const json& mats = field(fam, "matrices", p + ".family");
  if (dim <= 0 || count <= 0 || !mats.is_array() || static_cast<Index>(mats.size()) != count)
    throw CertificateParseError(p + ".family: dimension or count mismatch");
  std::vector<Matrix> ms;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const std::string mp = p + ".family.matrices[" + std::to_string(k) + "]";
    if (!mats[k].is_array() || static_cast<Index>(mats[k].size()) != dim * dim)
      throw CertificateParseError(mp + ": expected " + std::to_string(dim * dim) + " entries");
    Matrix a(dim, dim);
    for (Index r = 0; r < dim; ++r)
      for (Index q = 0; q < dim; ++q) a(r, q) = get_double(mats[k][static_cast<std::size_t>(r * dim + q)], mp);
    ms.push_back(a);
  }
  try {
    c.family = MatrixFamily(std::move(ms));
  } catch (const Error& e) {
    throw CertificateParseError(p + ".family: " + e.what());
  }
  const auto J = static_cast<std::size_t>(count);
  c.scale = get_double(field(fam, "scale", p + ".family"), p + ".family.scale");
  try {
    c.mode = parse_mode(get_string(field(j, "mode", p), p + ".mode"));
  } catch (const CertificateParseError&) {
    throw;
  } catch (const Error& e) {
    throw CertificateParseError(p + ".mode: " + e.what());
  }
  const json& cands = field(j, "candidates", p);
  if (!cands.is_array()) throw CertificateParseError(p + ".candidates: expected an array");
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const std::string cp = p + ".candidates[" + std::to_string(k) + "]";
    SmpCandidate s;
    s.word = get_word(field(cands[k], "word", cp), cp + ".word", J);
    s.averaged_spectral_radius = get_double(field(cands[k], "rho", cp), cp + ".rho");
    s.normalized = true;
    c.candidates.push_back(s);
  }
  c.norm = get_string(field(j, "norm", p), p + ".norm");

  const json& poly = field(j, "polytope", p);
  const json& verts = field(poly, "vertices", p + ".polytope");
  if (!verts.is_array()) throw CertificateParseError(p + ".polytope.vertices: expected an array");
  c.vertices = Matrix(dim, static_cast<Index>(verts.size()));
  for (std::size_t k = 0; k < verts.size(); ++k) {
    const std::string vp = p + ".polytope.vertices[" + std::to_string(k) + "]";
    if (!verts[k].is_array() || static_cast<Index>(verts[k].size()) != dim)
      throw CertificateParseError(vp + ": expected " + std::to_string(dim) + " entries");
    for (Index r = 0; r < dim; ++r)
      c.vertices(r, static_cast<Index>(k)) = get_double(verts[k][static_cast<std::size_t>(r)], vp);
  }
  const json& origins = field(poly, "origins", p + ".polytope");
  if (!origins.is_array()) throw CertificateParseError(p + ".polytope.origins: expected an array");
  for (std::size_t k = 0; k < origins.size(); ++k) {
    const std::string op = p + ".polytope.origins[" + std::to_string(k) + "]";
    VertexOrigin o;
    o.root = get_index(field(origins[k], "root", op), op + ".root");
    o.parent = get_index(field(origins[k], "parent", op), op + ".parent");
    o.word = get_word(field(origins[k], "word", op), op + ".word", J);
    c.origins.push_back(o);
  }
  if (poly.contains("sandwich")) {
    const json& s = poly["sandwich"];
    const std::string sp = p + ".polytope.sandwich";
    c.sandwich = SandwichConstants{get_double(field(s, "r", sp), sp + ".r"), get_double(field(s, "R", sp), sp + ".R"),
                                   get_string(field(s, "method", sp), sp + ".method")};
  }
  const json& roots = field(j, "roots", p);
  if (!roots.is_array()) throw CertificateParseError(p + ".roots: expected an array");
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const std::string rp = p + ".roots[" + std::to_string(k) + "]";
    RootRecord r;
    r.candidate = get_index(field(roots[k], "candidate", rp), rp + ".candidate");
    const json& ev = field(roots[k], "eigenvalue", rp);
    if (!ev.is_array() || ev.size() != 2) throw CertificateParseError(rp + ".eigenvalue: expected [re, im]");
    r.eigenvalue = Complex(get_double(ev[0], rp + ".eigenvalue"), get_double(ev[1], rp + ".eigenvalue"));
    r.part = get_string(field(roots[k], "part", rp), rp + ".part");
    r.scale = get_double(field(roots[k], "scale", rp), rp + ".scale");
    c.roots.push_back(r);
  }
  const json& trees = field(j, "trees", p);
  if (!trees.is_array()) throw CertificateParseError(p + ".trees: expected an array");
  for (std::size_t k = 0; k < trees.size(); ++k) {
    const std::string tp = p + ".trees[" + std::to_string(k) + "]";
    TreeRecord t;
    t.vertex = get_index(field(trees[k], "vertex", tp), tp + ".vertex");
    t.tree = parse_tree(trees[k], tp);
    c.trees.push_back(std::move(t));
  }
  const json& leaves = field(j, "leaf_verdicts", p);
  if (!leaves.is_array()) throw CertificateParseError(p + ".leaf_verdicts: expected an array");
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    const std::string lp = p + ".leaf_verdicts[" + std::to_string(k) + "]";
    LeafRecord l;
    l.tree = get_index(field(leaves[k], "tree", lp), lp + ".tree");
    l.node = get_index(field(leaves[k], "node", lp), lp + ".node");
    l.bound = get_double(field(leaves[k], "bound", lp), lp + ".bound");
    l.method = get_string(field(leaves[k], "method", lp), lp + ".method");
    c.leaves.push_back(l);
  }
  if (j.contains("reduction")) {
    const json& red = j["reduction"];
    const std::string rp = p + ".reduction";
    c.reduction_basis = get_rows(field(red, "basis", rp), rp + ".basis");
    const json& sizes = field(red, "block_sizes", rp);
    if (!sizes.is_array()) throw CertificateParseError(rp + ".block_sizes: expected an array");
    for (const auto& s : sizes) c.block_sizes.push_back(get_index(s, rp + ".block_sizes"));
    const json& blocks = field(red, "blocks", rp);
    if (!blocks.is_array()) throw CertificateParseError(rp + ".blocks: expected an array");
    for (std::size_t k = 0; k < blocks.size(); ++k)
      c.blocks.push_back(parse_cert(blocks[k], rp + ".blocks[" + std::to_string(k) + "]"));
  }
  const json& res = field(j, "result", p);
  c.lb = get_double(field(res, "lb", p + ".result"), p + ".result.lb");
  c.ub = get_double(field(res, "ub", p + ".result"), p + ".result.ub");
  c.status = get_string(field(res, "status", p + ".result"), p + ".result.status");
  if (j.contains("notes") && j["notes"].is_array())
    for (const auto& n : j["notes"])
      if (n.is_string()) c.notes.push_back(n.get<std::string>());
  if (j.contains("stats") && j["stats"].is_object()) {
    const json& st = j["stats"];
    if (st.contains("sweeps") && st["sweeps"].is_number_integer()) c.sweeps = st["sweeps"].get<Index>();
    if (st.contains("seconds") && st["seconds"].is_number()) c.seconds = st["seconds"].get<double>();
    if (st.contains("strict_margin") && st["strict_margin"].is_number())
      c.strict_margin = st["strict_margin"].get<double>();
  }
  return c;
}

}  // namespace

LeafConfig replay_leaf_config() {
  LeafConfig c;
  c.threshold = 1.0 - 1e-10;
  return c;
}

std::string to_json(const Certificate& cert, int indent) { return cert_json(cert).dump(indent); }

Certificate parse_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CertificateParseError(std::string("certificate is not valid JSON: ") + e.what());
  }
  return parse_cert(j, "$");
}

// ---------------------------------------------------------------------------
// Verification

namespace {

bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Root vertices are scaled parts of recomputed leading eigenvectors; every
// other vertex is one letter applied to its parent.
void verify_provenance(const Certificate& c, const MatrixFamily& A, const std::function<void(const std::string&)>& fail) {
  const Index nv = c.vertices.cols();
  if (static_cast<Index>(c.origins.size()) != nv) return fail("origin count does not match the vertex count");
  std::vector<int> used(c.roots.size(), 0);
  std::map<Index, std::vector<LeadingEigenpair>> pairs;
  auto close_vec = [](const Vector& got, const Vector& want) {
    return (got - want).norm() <= kReplayTol * std::max(1.0, want.norm());
  };
  for (Index i = 0; i < nv; ++i) {
    const VertexOrigin& o = c.origins[static_cast<std::size_t>(i)];
    const std::string vname = "vertex " + std::to_string(i);
    if (o.root < 0 || o.root >= static_cast<Index>(c.roots.size())) {
      fail(vname + ": root index out of range");
      continue;
    }
    const Vector v = c.vertices.col(i);
    if (o.parent < 0) {
      ++used[static_cast<std::size_t>(o.root)];
      const RootRecord& r = c.roots[static_cast<std::size_t>(o.root)];
      if (!o.word.empty()) fail(vname + ": root vertex with a nonempty word");
      if (r.candidate < 0 || r.candidate >= static_cast<Index>(c.candidates.size())) {
        fail(vname + ": root candidate out of range");
        continue;
      }
      if (!(r.scale > 0.0 && r.scale <= 1.0)) fail(vname + ": root scale outside (0, 1]");
      if (r.part != "re" && r.part != "im") fail(vname + ": root part must be re or im");
      auto it = pairs.find(r.candidate);
      if (it == pairs.end())
        it = pairs.emplace(r.candidate, leading_eigenpairs(word_product(A, c.candidates[static_cast<std::size_t>(r.candidate)].word)))
                 .first;
      bool found = false;
      for (const auto& pr : it->second) {
        if (std::abs(pr.value - r.eigenvalue) > kReplayTol) continue;
        const Vector want = r.scale * (r.part == "re" ? Vector(pr.vector.real()) : Vector(pr.vector.imag()));
        if (close_vec(v, want)) found = true;
      }
      if (!found) fail(vname + ": not the recorded part of a leading eigenvector of its candidate");
      continue;
    }
    if (o.parent >= i) {
      fail(vname + ": parent must precede the vertex");
      continue;
    }
    const VertexOrigin& po = c.origins[static_cast<std::size_t>(o.parent)];
    if (o.root != po.root || o.word.size() != po.word.size() + 1 || !o.word.starts_with(po.word)) {
      fail(vname + ": origin does not extend its parent's word by one letter");
      continue;
    }
    const int j = o.word.back();
    if (j < 0 || static_cast<std::size_t>(j) >= A.size()) {
      fail(vname + ": letter out of range");
      continue;
    }
    if (!close_vec(v, A[static_cast<std::size_t>(j)] * c.vertices.col(o.parent)))
      fail(vname + ": not the image of its parent under A_" + std::to_string(j + 1));
  }
  for (std::size_t k = 0; k < used.size(); ++k)
    if (used[k] != 1) fail("root record " + std::to_string(k) + " is used by " + std::to_string(used[k]) + " vertices");
}

void verify_into(const Certificate& c, VerificationReport& rep, const std::string& prefix) {
  auto fail = [&](const std::string& what) { rep.failures.push_back(prefix + what); };
  if (!c.certified()) {
    fail("certificate does not claim success (status '" + c.status + "')");
    return;
  }
  if (!(c.lb <= c.ub * (1 + kReplayTol))) fail("lb exceeds ub");

  if (c.mode == Mode::scalar) {
    if (c.family.dim() != 1) return fail("scalar certificate for a family of dimension " + std::to_string(c.family.dim()));
    double m = 0.0;
    for (const auto& a : c.family.matrices()) m = std::max(m, std::abs(a(0, 0)));
    if (c.lb != m || c.ub != m) fail("scalar bounds do not equal max |a_j|");
    return;
  }

  if (c.mode == Mode::reduced) {
    if (!c.reduction_basis || c.block_sizes.size() != 2 || c.blocks.size() != 2)
      return fail("reduced certificate needs a basis and two blocks");
    const Matrix& Q = *c.reduction_basis;
    const Index s = c.family.dim();
    if (Q.rows() != s || Q.cols() != s) return fail("reduction basis has the wrong shape");
    if ((Q.transpose() * Q - Matrix::Identity(s, s)).norm() > 1e-10) fail("reduction basis is not orthogonal");
    const Index k = c.block_sizes[0];
    if (k <= 0 || k >= s || c.block_sizes[1] != s - k) return fail("block sizes do not partition the dimension");
    for (std::size_t j = 0; j < c.family.size(); ++j) {
      const Matrix b = Q.transpose() * c.family[j] * Q;
      const double tol = 1e-9 * std::max(1.0, norm2(c.family[j])) * static_cast<double>(s);
      if (b.bottomLeftCorner(s - k, k).norm() > tol)
        fail("matrix " + std::to_string(j + 1) + " is not block upper triangular in the reduction basis");
      const Matrix top = b.topLeftCorner(k, k), bottom = b.bottomRightCorner(s - k, s - k);
      const auto& b0 = c.blocks[0].family;
      const auto& b1 = c.blocks[1].family;
      if (b0.size() != c.family.size() || b1.size() != c.family.size() || b0.dim() != k || b1.dim() != s - k)
        return fail("block families do not match the reduction");
      if ((b0[j] - top).norm() > tol || (b1[j] - bottom).norm() > tol)
        fail("block " + std::to_string(j + 1) + " does not match Q^T A Q");
    }
    for (std::size_t b = 0; b < 2; ++b) verify_into(c.blocks[b], rep, prefix + "block " + std::to_string(b) + ": ");
    const double lb = std::max(c.blocks[0].lb, c.blocks[1].lb), ub = std::max(c.blocks[0].ub, c.blocks[1].ub);
    if (lb != c.lb || ub != c.ub) fail("result does not equal the maximum over blocks");
    return;
  }

  if (c.candidates.empty()) return fail("no candidates");
  if (!(c.scale > 0.0) || !std::isfinite(c.scale)) return fail("scale must be positive");
  const MatrixFamily A = c.normalized();
  const std::size_t J = A.size();

  // Result fields against the stored family.
  const double top_raw = averaged_spectral_radius(c.family, c.candidates.front().word);
  if (!close_rel(top_raw, c.lb, kReplayTol))
    fail("lb " + std::to_string(c.lb) + " differs from the recomputed candidate radius " + std::to_string(top_raw));
  if (!close_rel(c.ub, c.scale, 1e-12)) fail("ub does not equal the scale");
  std::map<Word, double> radii;
  for (const auto& cand : c.candidates) {
    const double rho = spectral_radius(word_product(A, cand.word));
    radii[cand.word] = rho;
    const double avg = std::pow(rho, 1.0 / static_cast<double>(cand.word.size()));
    if (!close_rel(avg, cand.averaged_spectral_radius, kReplayTol))
      fail("candidate " + cand.word.to_string() + " radius mismatch");
  }

  std::optional<SymPolytope> P;
  std::optional<SandwichConstants> sc;
  if (c.norm == "polytope") {
    P = SymPolytope(c.vertices);
    if (!P->spans()) return fail("polytope vertices do not span R^s");
    sc = sandwich_constants(*P);
    if (!c.sandwich || !close_rel(c.sandwich->r, sc->r, kReplayTol) || !close_rel(c.sandwich->R, sc->R, kReplayTol) ||
        c.sandwich->method != sc->method)
      fail("sandwich constants do not reproduce");
  } else if (c.norm != "2-norm") {
    return fail("unknown norm '" + c.norm + "'");
  }
  const NormChoice nc = P ? NormChoice{&*P, &*sc} : NormChoice{};

  const bool vertex_trees = c.mode == Mode::ipa || c.mode == Mode::hybrid;
  if (vertex_trees) {
    if (!P) return fail("polytope modes need a polytope norm");
    verify_provenance(c, A, fail);
    if (static_cast<Index>(c.trees.size()) != c.vertices.cols())
      fail("tree count " + std::to_string(c.trees.size()) + " does not match vertex count " +
           std::to_string(c.vertices.cols()));
  } else if (c.trees.size() != 1 || c.trees.front().vertex != -1) {
    return fail("tree mode needs exactly one matrix tree");
  }

  std::map<std::pair<Index, Index>, const LeafRecord*> stored;
  for (const auto& l : c.leaves) {
    if (!stored.emplace(std::make_pair(l.tree, l.node), &l).second)
      fail("duplicate leaf record for tree " + std::to_string(l.tree) + " node " + std::to_string(l.node));
  }
  std::size_t matched = 0;
  for (std::size_t t = 0; t < c.trees.size(); ++t) {
    const TreeRecord& tr = c.trees[t];
    const std::string tname = "tree " + std::to_string(t);
    if (tr.tree.letters() != J) {
      fail(tname + ": alphabet size differs from the family");
      continue;
    }
    if (vertex_trees && (tr.vertex != static_cast<Index>(t) || tr.vertex >= c.vertices.cols())) {
      fail(tname + ": refers to vertex " + std::to_string(tr.vertex));
      continue;
    }
    if (auto err = tr.tree.validate(&radii)) fail(tname + ": " + *err);
    const Vector v = vertex_trees ? Vector(c.vertices.col(tr.vertex)) : Vector();
    for (Index n : tr.tree.leafage()) {
      const NodeFamily& f = tr.tree.node(n).family;
      const std::string lname = tname + " leaf " + std::to_string(n) + " " + f.to_string() +
                                (vertex_trees ? " applied to vertex " + std::to_string(tr.vertex) : "");
      const auto it = stored.find({static_cast<Index>(t), n});
      if (it == stored.end()) {
        fail(lname + ": no stored verdict");
        continue;
      }
      ++matched;
      const LeafEvaluation ev = evaluate_leaf(f, A, vertex_trees ? &v : nullptr, nc, replay_leaf_config());
      ++rep.leaves_checked;
      const double dev = std::abs(ev.bound - it->second->bound);
      if (std::isfinite(dev)) rep.max_deviation = std::max(rep.max_deviation, dev);
      if (!(dev <= kReplayTol) && ev.bound != it->second->bound)
        fail(lname + ": stored bound " + std::to_string(it->second->bound) + " but recomputed " +
             std::to_string(ev.bound));
      if (ev.method != it->second->method)
        fail(lname + ": stored method '" + it->second->method + "' but recomputed '" + ev.method + "'");
      if (!(ev.bound <= 1.0 + kReplayTol))
        fail(lname + (vertex_trees ? ": membership in co_s V fails, norm " : ": norm bound ") +
             std::to_string(ev.bound) + " exceeds one");
    }
  }
  if (matched != c.leaves.size()) fail("leaf records that are not uncovered leaves of any tree");
}

}  // namespace

VerificationReport verify_certificate(const Certificate& cert) {
  VerificationReport rep;
  try {
    verify_into(cert, rep, "");
  } catch (const Error& e) {
    rep.failures.push_back(std::string("replay error: ") + e.what());
  }
  rep.valid = rep.failures.empty();
  return rep;
}

}  // namespace jsr
