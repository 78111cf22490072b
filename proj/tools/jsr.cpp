#include "jsr/bench.hpp"
#include "jsr/candidates.hpp"
#include "jsr/certificate.hpp"
#include "jsr/io.hpp"
#include "jsr/prover.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

namespace {

constexpr int kCertified = 0;
constexpr int kError = 1;
constexpr int kInconclusive = 2;

std::vector<jsr::Index> parse_dims(const std::string& text) {
  // "4..14", "4..14:2" or "4,6,8".
  std::vector<jsr::Index> out;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      out.push_back(std::stol(text.substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    const auto colon = text.find(':', dots);
    const long lo = std::stol(text.substr(0, dots));
    const long hi = std::stol(text.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
    const long step = colon == std::string::npos ? 1 : std::stol(text.substr(colon + 1));
    if (step <= 0) throw jsr::Error("--dims step must be positive");
    for (long d = lo; d <= hi; d += step) out.push_back(d);
  }
  for (auto d : out)
    if (d < 1) throw jsr::Error("--dims entries must be positive");
  if (out.empty()) throw jsr::Error("--dims is empty");
  return out;
}

void print_certificate_summary(const jsr::Certificate& cert) {
  using jsr::format_double;
  std::cout << "mode       " << jsr::to_string(cert.mode) << '\n';
  if (!cert.candidates.empty()) std::cout << "candidate  " << cert.candidates.front().word.to_string() << '\n';
  std::cout << "lb         " << format_double(cert.lb) << '\n';
  std::cout << "ub         " << format_double(cert.ub) << '\n';
  std::cout << "status     " << cert.status << '\n';
  if (cert.mode == jsr::Mode::ipa || cert.mode == jsr::Mode::hybrid)
    std::cout << "vertices   " << cert.vertices.cols() << '\n';
  for (const auto& n : cert.notes) std::cout << "note       " << n << '\n';
  if (cert.certified() && cert.lb == cert.ub)
    std::cout << "JSR = " << format_double(cert.ub) << " (certified)\n";
  else if (cert.certified())
    std::cout << "JSR in [" << format_double(cert.lb) << ", " << format_double(cert.ub) << "] (certified)\n";
  else
    std::cout << "JSR in [" << format_double(cert.lb) << ", " << format_double(cert.ub) << "] (inconclusive)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds on the joint spectral radius of a finite matrix family"};
  app.require_subcommand(1);

  auto* est = app.add_subcommand("estimate", "bound the JSR of a family file");
  std::string family_path, mode = "hybrid", cert_out;
  jsr::ProverConfig cfg;
  est->add_option("file", family_path, "family JSON file")->required();
  est->add_option("--mode", mode, "tree | ipa | hybrid | tree+warmstart")
      ->check(CLI::IsMember({"tree", "ipa", "hybrid", "tree+warmstart"}));
  est->add_option("--max-depth", cfg.max_depth, "tree depth cap")->check(CLI::PositiveNumber);
  est->add_option("--max-vertices", cfg.max_vertices, "polytope vertex cap")->check(CLI::PositiveNumber);
  est->add_option("--strict-margin", cfg.strict_margin, "accept points with norm <= 1 - margin")
      ->check(CLI::Range(0.0, 0.5));
  est->add_option("--subtree-depth", cfg.subtree_depth, "hybrid subtree depth")->check(CLI::PositiveNumber);
  est->add_flag("--finite-subtrees", cfg.finite_subtrees_only, "hybrid subtrees without generators");
  est->add_option("--max-len", cfg.max_len, "candidate search length (0 = default)")->check(CLI::NonNegativeNumber);
  est->add_option("--cert-out", cert_out, "write the certificate JSON here");

  auto* ver = app.add_subcommand("verify", "replay a certificate");
  std::string cert_path;
  ver->add_option("cert", cert_path, "certificate JSON file")->required();

  auto* bench = app.add_subcommand("bench", "compare polytope sizes of ipa and hybrid on random families");
  std::string dims = "4..14:2", bench_out;
  jsr::BenchConfig bcfg;
  bench->add_option("--dims", dims, "dimensions: a..b, a..b:step or a,b,c");
  bench->add_option("--trials", bcfg.trials, "trials per dimension")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bcfg.seed, "random seed");
  bench->add_option("--max-vertices", bcfg.prover.max_vertices, "vertex cap per run")->check(CLI::PositiveNumber);
  bench->add_option("--json-out", bench_out, "write the machine-readable report here");

  auto* cand = app.add_subcommand("candidates", "list s.m.p. candidates");
  int max_len = 0, keep = 8;
  cand->add_option("file", family_path, "family JSON file")->required();
  cand->add_option("--max-len", max_len, "word length (0 = default)")->check(CLI::NonNegativeNumber);
  cand->add_option("--keep", keep, "candidates to report")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*est) {
      const jsr::FamilyFile file = jsr::read_family(family_path);
      cfg.mode = jsr::parse_mode(mode);
      const jsr::Certificate cert = jsr::estimate_jsr(file.family, cfg);
      print_certificate_summary(cert);
      if (!cert_out.empty()) jsr::write_text(cert_out, jsr::to_json(cert) + "\n");
      return cert.certified() ? kCertified : kInconclusive;
    }
    if (*ver) {
      const jsr::Certificate cert = jsr::parse_certificate(jsr::read_text(cert_path));
      const jsr::VerificationReport rep = jsr::verify_certificate(cert);
      if (rep.valid) {
        std::cout << "valid: " << rep.leaves_checked << " leaves replayed, max deviation "
                  << jsr::format_double(rep.max_deviation) << '\n';
        std::cout << "JSR in [" << jsr::format_double(cert.lb) << ", " << jsr::format_double(cert.ub) << "]\n";
        return kCertified;
      }
      std::cout << "invalid\n";
      for (const auto& f : rep.failures) std::cout << "  " << f << '\n';
      return kInconclusive;
    }
    if (*bench) {
      bcfg.dims = parse_dims(dims);
      const jsr::BenchReport rep = jsr::run_bench(bcfg);
      std::cout << rep.table();
      if (!bench_out.empty()) jsr::write_text(bench_out, rep.to_json() + "\n");
      return kCertified;
    }
    if (*cand) {
      const jsr::FamilyFile file = jsr::read_family(family_path);
      const int len = max_len > 0 ? max_len : jsr::default_max_len(file.family.size());
      const jsr::CandidateSearch s = jsr::find_candidates(file.family, len, keep);
      nlohmann::json out;
      out["max_len"] = len;
      out["lb"] = s.lb;
      out["ub"] = s.ub;
      out["evaluated"] = s.evaluated;
      nlohmann::json list = nlohmann::json::array();
      for (const auto& c : s.candidates)
        list.push_back({{"word", c.word.one_based()}, {"rho", c.averaged_spectral_radius}});
      out["candidates"] = list;
      std::cout << out.dump(2) << '\n';
      return kCertified;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
