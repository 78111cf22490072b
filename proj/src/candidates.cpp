#include "jsr/candidates.hpp"

#include "jsr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jsr {

double averaged_spectral_radius(const MatrixFamily& family, const Word& w) {
  if (w.empty()) throw DimensionError("averaged_spectral_radius: empty word");
  const double rho = spectral_radius(word_product(family, w));
  return std::pow(rho, 1.0 / static_cast<double>(w.size()));
}

int default_max_len(std::size_t letters) {
  if (letters <= 1) return 1;
  const double len = std::floor(std::log(4096.0) / std::log(static_cast<double>(letters)));
  return static_cast<int>(std::clamp(len, 1.0, 12.0));
}

CandidateSearch find_candidates(const MatrixFamily& family, int max_len, int keep) {
  if (max_len < 1) throw DimensionError("find_candidates: max_len must be at least 1");
  const std::size_t J = family.size();
  const auto L = static_cast<std::size_t>(max_len);

  double log_max_norm = -std::numeric_limits<double>::infinity();
  for (const auto& a : family.matrices()) log_max_norm = std::max(log_max_norm, std::log(norm2(a)));

  struct Node {
    Word word;
    Matrix product;
  };
  struct Evaluated {
    Word word;
    double rho;
  };
  std::vector<Evaluated> evaluated;
  std::vector<double> level_max(L + 1, 0.0);
  double lb = 0.0;

  // A node is pruned when no extension up to length L can beat lb - tie.
  auto prunable = [&](double norm, std::size_t k) {
    const double thr = lb * (1 - kCoCandidateTol);
    if (norm == 0.0) return true;
    if (thr <= 0.0) return false;
    const double log_thr = std::log(thr);
    const double log_n = std::log(norm);
    for (std::size_t extra = 0; extra + k <= L; ++extra)
      if (log_n + static_cast<double>(extra) * log_max_norm >= static_cast<double>(k + extra) * log_thr)
        return false;
    return true;
  };

  std::vector<Node> stack;
  for (std::size_t j = J; j-- > 0;) stack.push_back({Word{static_cast<int>(j)}, family[j]});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const std::size_t k = node.word.size();
    const double n = norm2(node.product);
    if (k > 1 && prunable(n, k)) continue;
    level_max[k] = std::max(level_max[k], std::pow(n, 1.0 / static_cast<double>(k)));
    if (node.word.is_primitive() && node.word.canonical_rotation() == node.word) {
      const double rho = std::pow(spectral_radius(node.product), 1.0 / static_cast<double>(k));
      evaluated.push_back({node.word, rho});
      lb = std::max(lb, rho);
    }
    if (k < L)
      for (std::size_t j = J; j-- > 0;)
        stack.push_back({node.word.then(static_cast<int>(j)), family[j] * node.product});
  }

  CandidateSearch out;
  out.lb = lb;
  out.evaluated = static_cast<Index>(evaluated.size());
  out.ub = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= L; ++k) out.ub = std::min(out.ub, std::max(lb, level_max[k]));

  const double tie = lb * (1 - kCoCandidateTol);
  std::stable_sort(evaluated.begin(), evaluated.end(), [&](const Evaluated& a, const Evaluated& b) {
    const bool ta = a.rho >= tie, tb = b.rho >= tie;
    if (ta != tb) return ta;
    if (ta) return a.word < b.word;
    if (a.rho != b.rho) return a.rho > b.rho;
    return a.word < b.word;
  });
  std::size_t ties = 0;
  while (ties < evaluated.size() && evaluated[ties].rho >= tie) ++ties;
  const std::size_t count = std::min(evaluated.size(), std::max(ties, static_cast<std::size_t>(std::max(keep, 1))));
  for (std::size_t i = 0; i < count; ++i) out.candidates.push_back({evaluated[i].word, evaluated[i].rho, false});
  return out;
}

MatrixFamily normalize(const MatrixFamily& family, const SmpCandidate& candidate) {
  const double lambda = averaged_spectral_radius(family, candidate.word);
  if (lambda == 0.0) throw ZeroSpectralRadiusError("normalize: candidate product has spectral radius zero");
  if (std::abs(lambda - 1.0) <= 1e-15) return family;
  std::vector<Matrix> scaled;
  scaled.reserve(family.size());
  for (const auto& a : family.matrices()) scaled.push_back(a / lambda);
  return MatrixFamily(std::move(scaled), family.scale() * lambda);
}

double lower_bound(const MatrixFamily& family, int max_len) {
  return find_candidates(family, max_len, 1).lb;
}

}  // namespace jsr
