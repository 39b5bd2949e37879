// Command-line front end: combine, evaluate, outliers, audit, simulate.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hapcombine/driver.hpp"

namespace {

using hapcombine::DistanceSpec;
using hapcombine::NoiseSpec;
using hapcombine::TiePolicy;
using hapcombine::cli::Command;
using hapcombine::cli::RunConfig;

struct Options {
  std::string mode = "vote";
  std::string distance = "switch";
  std::size_t k = 0;
  std::string tie_break = "lex";
  std::uint64_t seed = 0;
  bool strict = false;
  bool lenient = false;
  std::string noise = "switch:0.05";
};

DistanceSpec parse_distance(const std::string& name, std::size_t k) {
  if (name == "switch") return DistanceSpec::switch_distance();
  if (name == "hamming") return DistanceSpec::hamming();
  if (name == "khamming") {
    if (k == 0) throw CLI::ValidationError("--k", "required with --distance khamming");
    return DistanceSpec::k_hamming(k);
  }
  throw CLI::ValidationError("--distance", "expected switch, hamming or khamming");
}

NoiseSpec parse_noise(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--noise", "expected KIND:P");
  const std::string kind = text.substr(0, colon);
  const double p = std::stod(text.substr(colon + 1));
  if (kind == "switch") return NoiseSpec::switches(p);
  if (kind == "allele") return NoiseSpec::alleles(p);
  throw CLI::ValidationError("--noise", "kind must be switch or allele");
}

void add_distance(CLI::App* cmd, Options& opt) {
  cmd->add_option("--distance", opt.distance, "switch | hamming | khamming")
      ->check(CLI::IsMember({"switch", "hamming", "khamming"}));
  cmd->add_option("--k", opt.k, "window length for khamming")->check(CLI::Range(2, 64));
}

void add_common(CLI::App* cmd, RunConfig& cfg, Options& opt) {
  cmd->add_option("--genotypes", cfg.genotypes, "genotype file")->check(CLI::ExistingFile);
  cmd->add_flag("--strict", opt.strict, "reject pairs contradicting the genotype (default)");
  cmd->add_flag("--lenient", opt.lenient, "mask contradicting markers instead of failing");
  cmd->add_flag("--fail-on-missing", cfg.fail_on_missing,
                "fail when an individual is absent from some input");
  cmd->add_option("--threads", cfg.threads, "worker threads (default: $HAPCOMBINE_THREADS or 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combine haplotype reconstructions into a consensus"};
  app.require_subcommand(1);

  RunConfig cfg;
  Options opt;

  auto* combine = app.add_subcommand("combine", "combine reconstructions per individual");
  combine->add_option("--mode", opt.mode, "vote | select")->check(CLI::IsMember({"vote", "select"}));
  add_distance(combine, opt);
  combine->add_option("--inputs", cfg.inputs, "haplotype files, one per method")
      ->required()
      ->check(CLI::ExistingFile);
  combine->add_option("--truth", cfg.truth, "true haplotypes; adds switch_error to the report")
      ->check(CLI::ExistingFile);
  combine->add_option("--out", cfg.out_dir, "output directory")->required();
  combine->add_option("--tie-break", opt.tie_break, "lex | first | random")
      ->check(CLI::IsMember({"lex", "first", "random"}));
  combine->add_option("--seed", opt.seed, "seed for --tie-break random");
  combine->add_option("--l-max", cfg.limits.l_max, "largest l for the ordering sweep");
  combine->add_option("--mprime-max", cfg.limits.mprime_max,
                      "largest het count for candidate enumeration")
      ->check(CLI::Range(1, 63));
  combine->add_option("--k-max", cfg.limits.k_max, "largest window for the k-Hamming solver");
  add_common(combine, cfg, opt);

  auto* evaluate = app.add_subcommand("evaluate", "switch and Hamming error against truth");
  evaluate->add_option("--pred", cfg.pred, "predicted haplotypes")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", cfg.truth, "true haplotypes")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--genotypes", cfg.genotypes, "genotype file")->check(CLI::ExistingFile);
  evaluate->add_option("--out", cfg.out_dir, "also write evaluation.jsonl here");

  auto* outliers = app.add_subcommand("outliers", "per-individual disagreement between methods");
  outliers->add_option("--inputs", cfg.inputs, "haplotype files")->required()->check(CLI::ExistingFile);
  add_distance(outliers, opt);
  outliers->add_option("--truth", cfg.truth, "true haplotypes; enables the correlation")
      ->check(CLI::ExistingFile);
  outliers->add_option("--designated", cfg.designated,
                       "0-based input whose error is correlated with disagreement");
  add_common(outliers, cfg, opt);

  auto* audit = app.add_subcommand("audit", "compare selection against exact voting");
  audit->add_option("--inputs", cfg.inputs, "haplotype files")->required()->check(CLI::ExistingFile);
  add_distance(audit, opt);
  audit->add_option("--l-max", cfg.limits.l_max, "largest l for the ordering sweep");
  audit->add_option("--mprime-max", cfg.limits.mprime_max,
                    "largest het count for candidate enumeration")
      ->check(CLI::Range(1, 63));
  add_common(audit, cfg, opt);

  auto* simulate = app.add_subcommand("simulate", "synthetic truth and noisy reconstructions");
  simulate->add_option("--m", cfg.sim.m, "markers per individual")->check(CLI::PositiveNumber);
  simulate->add_option("--het-frac", cfg.sim.het_fraction, "fraction of het markers")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--l", cfg.sim.l, "reconstructions per individual")->check(CLI::PositiveNumber);
  simulate->add_option("--n", cfg.individuals, "number of individuals");
  simulate->add_option("--noise", opt.noise, "switch:P or allele:P");
  simulate->add_option("--seed", cfg.sim.seed, "random seed");
  simulate->add_option("--out", cfg.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (opt.strict && opt.lenient) throw CLI::ValidationError("--strict", "conflicts with --lenient");
    if (opt.lenient) cfg.policy = hapcombine::ValidationPolicy::Lenient;
    if (*combine) {
      cfg.command = Command::Combine;
      cfg.mode = opt.mode == "vote" ? hapcombine::CombineMode::Vote : hapcombine::CombineMode::Select;
    } else if (*evaluate) {
      cfg.command = Command::Evaluate;
    } else if (*outliers) {
      cfg.command = Command::Outliers;
    } else if (*audit) {
      cfg.command = Command::Audit;
    } else {
      cfg.command = Command::Simulate;
      cfg.noise = parse_noise(opt.noise);
    }
    if (!*simulate && !*evaluate) cfg.distance = parse_distance(opt.distance, opt.k);
    if (opt.tie_break == "first") {
      cfg.ties = TiePolicy::first();
    } else if (opt.tie_break == "random") {
      cfg.ties = TiePolicy::random(opt.seed);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hapcombine::cli::exit_code::validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hapcombine::cli::exit_code::validation;
  }

  return hapcombine::cli::run(cfg, std::cout, std::cerr);
}
