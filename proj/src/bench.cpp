#include "jsr/bench.hpp"

#include "jsr/io.hpp"
#include "jsr/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

namespace jsr {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MatrixFamily random_family(std::uint64_t seed, Index dim, Index trial, Index letters) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(trial)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix> mats;
  for (Index j = 0; j < letters; ++j) {
    Matrix a(dim, dim);
    for (Index r = 0; r < dim; ++r)
      for (Index c = 0; c < dim; ++c) a(r, c) = normal(rng);
    mats.push_back(a);
  }
  return MatrixFamily(std::move(mats));
}

BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw Error("bench: trial count must be positive");
  BenchReport report;
  report.seed = cfg.seed;
  report.letters = cfg.letters;
  for (Index d : cfg.dims)
    for (Index t = 0; t < cfg.trials; ++t) report.trials.push_back({d, t});

  ProverConfig pc = cfg.prover;
  pc.threads = 1;
  ProverConfig ipa_cfg = pc;
  ipa_cfg.mode = Mode::ipa;
  ProverConfig hyb_cfg = pc;
  hyb_cfg.mode = Mode::hybrid;
  hyb_cfg.finite_subtrees_only = true;

  parallel_for(report.trials.size(), [&](std::size_t i) {
    BenchTrial& tr = report.trials[i];
    const MatrixFamily fam = random_family(cfg.seed, tr.dim, tr.trial, cfg.letters);
    const CandidateSearch search = find_candidates(fam, default_max_len(fam.size()), pc.keep);
    if (search.lb == 0.0) return;
    const MatrixFamily normalized = normalize(fam, search.candidates.front());
    std::vector<SmpCandidate> cands = search.candidates;
    const double lambda = normalized.scale();
    for (auto& c : cands) c.averaged_spectral_radius /= lambda;
    const Certificate a = prove_ipa(normalized, cands, ipa_cfg);
    const Certificate b = prove_hybrid(normalized, cands, hyb_cfg);
    tr.ipa_vertices = a.vertices.cols();
    tr.hybrid_vertices = b.vertices.cols();
    tr.ipa_certified = a.certified();
    tr.hybrid_certified = b.certified();
    tr.ipa_seconds = a.seconds;
    tr.hybrid_seconds = b.seconds;
  });

  for (Index d : cfg.dims) {
    BenchRow row;
    row.dim = d;
    std::vector<double> vr, trat;
    for (const auto& tr : report.trials) {
      if (tr.dim != d) continue;
      if (!tr.ipa_certified || !tr.hybrid_certified) {
        ++row.inconclusive;
        continue;
      }
      vr.push_back(static_cast<double>(tr.hybrid_vertices) / static_cast<double>(tr.ipa_vertices));
      trat.push_back(tr.hybrid_seconds / std::max(tr.ipa_seconds, 1e-9));
    }
    row.trials = static_cast<Index>(vr.size());
    row.vertex_ratio = median(vr);
    row.time_ratio = median(trat);
    report.rows.push_back(row);
  }
  return report;
}

std::string BenchReport::table() const {
  std::ostringstream os;
  os << "dim  vertex-ratio  time-ratio  trials  inconclusive\n";
  for (const auto& r : rows)
    os << std::setw(3) << r.dim << "  " << std::setw(12) << std::fixed << std::setprecision(3) << r.vertex_ratio
       << "  " << std::setw(10) << r.time_ratio << "  " << std::setw(6) << r.trials << "  " << std::setw(12)
       << r.inconclusive << '\n';
  return os.str();
}

std::string BenchReport::to_json(bool with_times) const {
  nlohmann::json j;
  j["seed"] = seed;
  j["letters"] = letters;
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o = {{"dim", r.dim}, {"vertex_ratio", r.vertex_ratio}, {"trials", r.trials},
                        {"inconclusive", r.inconclusive}};
    if (with_times) o["time_ratio"] = r.time_ratio;
    rs.push_back(o);
  }
  j["rows"] = rs;
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : trials) {
    nlohmann::json o = {{"dim", t.dim},
                        {"trial", t.trial},
                        {"ipa_vertices", t.ipa_vertices},
                        {"hybrid_vertices", t.hybrid_vertices},
                        {"ipa_certified", t.ipa_certified},
                        {"hybrid_certified", t.hybrid_certified}};
    if (with_times) {
      o["ipa_seconds"] = t.ipa_seconds;
      o["hybrid_seconds"] = t.hybrid_seconds;
    }
    ts.push_back(o);
  }
  j["trials"] = ts;
  return j.dump(2);
}

}  // namespace jsr
