#pragma once

// Batch driver behind the command-line tool: assembles per-individual
// ensembles from method files, runs them in parallel and writes reports.
//
// Report records are JSON lines with a fixed key order. Combine records carry
//   id, mode, distance, k, score, tie_count, certificate, solver,
//   disagreement, switch_error (only with --truth)
// followed by `resolved` / `masked` when Missing calls were resolved or
// markers masked for that individual.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hapcombine/combine.hpp"
#include "hapcombine/core.hpp"
#include "hapcombine/distance.hpp"
#include "hapcombine/error.hpp"
#include "hapcombine/evaluate.hpp"
#include "hapcombine/io.hpp"
#include "hapcombine/simulate.hpp"

namespace hapcombine::cli {

enum class Command { Combine, Evaluate, Simulate, Audit, Outliers };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int validation = 2;
}  // namespace exit_code

struct RunConfig {
  Command command = Command::Combine;
  CombineMode mode = CombineMode::Vote;
  DistanceSpec distance = DistanceSpec::switch_distance();
  std::vector<std::string> inputs;
  std::optional<std::string> genotypes;
  std::optional<std::string> truth;
  std::optional<std::string> pred;
  TiePolicy ties = TiePolicy::lexicographic();
  SolverLimits limits;
  ValidationPolicy policy = ValidationPolicy::Strict;
  bool fail_on_missing = false;
  /// 0 means HAPCOMBINE_THREADS, or 1 when unset.
  std::size_t threads = 0;
  std::string out_dir;
  /// Member whose error is correlated with disagreement (outliers).
  std::size_t designated = 0;

  SimConfig sim;
  std::size_t individuals = 100;
  NoiseSpec noise = NoiseSpec::switches(0.05);
};

inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HAPCOMBINE_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Runs f(i) for i in [0, n) on `threads` workers. Each index runs exactly once.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace detail {

using json = nlohmann::ordered_json;

inline const char* call_name(Call c) {
  switch (c) {
    case Call::Hom0: return "hom0";
    case Call::Het: return "het";
    case Call::Hom1: return "hom1";
    case Call::Missing: return "missing";
  }
  return "?";
}

inline void warn(std::ostream& err, const std::string& msg) { err << "warning: " << msg << '\n'; }

struct MethodFile {
  std::string label;
  PairMap pairs;
};

inline std::vector<MethodFile> load_methods(const std::vector<std::string>& paths) {
  std::vector<MethodFile> files;
  for (const std::string& p : paths) {
    files.push_back({std::filesystem::path(p).stem().string(), io::parse_haplotype_file(p)});
  }
  return files;
}

struct Individual {
  std::string id;
  Genotype genotype;
  std::vector<Member> members;
};

/// Groups the method files by individual. Strict runs keep individuals
/// present in every file; lenient runs keep any individual present somewhere.
inline std::vector<Individual> gather(const std::vector<MethodFile>& files,
                                      const std::optional<GenotypeMap>& genotypes,
                                      const RunConfig& cfg, std::ostream& err) {
  std::set<std::string> ids;
  for (const MethodFile& f : files) {
    for (const auto& kv : f.pairs) ids.insert(kv.first);
  }
  std::vector<Individual> out;
  for (const std::string& id : ids) {
    Individual ind;
    ind.id = id;
    std::vector<std::string> absent;
    for (const MethodFile& f : files) {
      auto it = f.pairs.find(id);
      if (it == f.pairs.end()) {
        absent.push_back(f.label);
      } else {
        ind.members.push_back({f.label, it->second});
      }
    }
    if (!absent.empty()) {
      std::string names;
      for (const auto& a : absent) names += (names.empty() ? "" : ",") + a;
      if (cfg.fail_on_missing) {
        throw Error(Errc::Validation, "individual '" + id + "' missing from " + names);
      }
      const bool keep = cfg.policy == ValidationPolicy::Lenient;
      warn(err, "individual '" + id + "' missing from " + names + (keep ? "" : "; skipped"));
      if (!keep) continue;
    }
    if (genotypes) {
      auto g = genotypes->find(id);
      if (g == genotypes->end()) {
        throw Error(Errc::Validation, "individual '" + id + "' has no genotype");
      }
      ind.genotype = g->second;
    } else {
      ind.genotype = genotype_of(ind.members.front().pair, id);
    }
    out.push_back(std::move(ind));
  }
  return out;
}

/// Runs `task` per individual and rethrows the first failure in id order.
template <class Result, class Task>
std::vector<Result> map_individuals(const std::vector<Individual>& inds, std::size_t threads,
                                    Task&& task) {
  std::vector<std::optional<Result>> results(inds.size());
  std::vector<std::exception_ptr> errors(inds.size());
  parallel_for(inds.size(), threads, [&](std::size_t i) {
    try {
      results[i].emplace(task(inds[i]));
    } catch (const Error& e) {
      errors[i] = std::make_exception_ptr(
          Error(e.code(), "individual '" + inds[i].id + "': " + e.what()));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(inds.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

inline std::vector<Ensemble> build_ensembles(const std::vector<Individual>& inds,
                                             const RunConfig& cfg, std::size_t threads) {
  return map_individuals<Ensemble>(inds, threads, [&](const Individual& ind) {
    return Ensemble(ind.genotype, ind.members, cfg.policy);
  });
}

inline std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path.string() + "'");
  return out;
}

inline std::optional<GenotypeMap> load_genotypes(const RunConfig& cfg) {
  if (!cfg.genotypes) return std::nullopt;
  return io::parse_genotype_file(*cfg.genotypes);
}

inline json k_field(const DistanceSpec& spec) {
  return spec.kind() == DistanceSpec::Kind::KHamming ? json(spec.k()) : json(nullptr);
}

inline int run_combine(const RunConfig& cfg, std::ostream& err) {
  if (cfg.inputs.empty()) throw Error(Errc::InvalidArgument, "combine needs at least one input");
  const auto files = load_methods(cfg.inputs);
  const auto genotypes = load_genotypes(cfg);
  std::optional<PairMap> truth;
  if (cfg.truth) truth = io::parse_haplotype_file(*cfg.truth);
  const auto inds = gather(files, genotypes, cfg, err);
  const std::size_t threads = resolve_threads(cfg.threads);

  struct Row {
    CombineResult result;
    Distance disagreement;
    std::optional<Distance> switch_error;
    std::vector<Ensemble::Resolution> resolved;
    std::vector<std::size_t> masked;
  };
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < inds.size(); ++i) position[inds[i].id] = i;

  const auto rows = map_individuals<Row>(inds, threads, [&](const Individual& ind) {
    const Ensemble e(ind.genotype, ind.members, cfg.policy);
    Row row;
    row.result = combine(e, cfg.mode, cfg.distance, cfg.ties.for_individual(position.at(ind.id)),
                         cfg.limits);
    row.disagreement = disagreement(e, cfg.distance);
    if (truth) {
      auto t = truth->find(ind.id);
      if (t == truth->end()) {
        throw Error(Errc::MissingTruth, "no truth for individual '" + ind.id + "'");
      }
      row.switch_error = switch_error(row.result.pair, t->second, e.het_index());
    }
    row.resolved = e.resolutions();
    for (std::size_t i = 0; i < e.markers(); ++i) {
      if (e.mask()[i] != 0) row.masked.push_back(i + 1);
    }
    return row;
  });

  const std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  std::filesystem::create_directories(dir);
  PairMap consensus;
  auto report = create(dir / "report.jsonl");
  for (std::size_t i = 0; i < inds.size(); ++i) {
    const Row& row = rows[i];
    auto [h1, h2] = canonical_orientation(row.result.pair);
    consensus.emplace(inds[i].id, HaplotypePair(std::move(h1), std::move(h2)));

    json rec;
    rec["id"] = inds[i].id;
    rec["mode"] = cfg.mode == CombineMode::Vote ? "vote" : "select";
    rec["distance"] = cfg.distance.name();
    rec["k"] = k_field(cfg.distance);
    rec["score"] = row.result.score;
    rec["tie_count"] = row.result.tie_count;
    rec["certificate"] = to_string(row.result.certificate);
    rec["solver"] = to_string(row.result.solver);
    rec["disagreement"] = row.disagreement;
    if (row.switch_error) rec["switch_error"] = *row.switch_error;
    if (!row.resolved.empty()) {
      json res = json::array();
      for (const auto& r : row.resolved) res.push_back({{"marker", r.marker}, {"call", call_name(r.resolved)}});
      rec["resolved"] = std::move(res);
    }
    if (!row.masked.empty()) rec["masked"] = row.masked;
    report << rec.dump() << '\n';
  }
  auto out = create(dir / "consensus.hap");
  io::write_haplotypes(out, consensus);
  return exit_code::ok;
}

inline int run_evaluate(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.pred || !cfg.truth) throw Error(Errc::InvalidArgument, "evaluate needs --pred and --truth");
  const PairMap pred = io::parse_haplotype_file(*cfg.pred);
  const PairMap truth = io::parse_haplotype_file(*cfg.truth);
  const auto genotypes = load_genotypes(cfg);
  const EvalReport report = total_error(pred, truth, genotypes ? &*genotypes : nullptr);

  std::ostringstream text;
  for (const EvalRow& r : report.rows) {
    json rec;
    rec["id"] = r.id;
    rec["mprime"] = r.mprime;
    rec["switch_error"] = r.switch_error;
    rec["relative_switch_error"] = r.relative_switch_error;
    rec["hamming_error"] = r.hamming_error;
    rec["relative_hamming_error"] = r.relative_hamming_error;
    text << rec.dump() << '\n';
  }
  json total;
  total["individuals"] = report.rows.size();
  total["total_switch_error"] = report.total_switch_error;
  total["total_hamming_error"] = report.total_hamming_error;
  text << total.dump() << '\n';

  out << text.str();
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    create(std::filesystem::path(cfg.out_dir) / "evaluation.jsonl") << text.str();
  }
  return exit_code::ok;
}

inline int run_outliers(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto files = load_methods(cfg.inputs);
  const auto genotypes = load_genotypes(cfg);
  std::optional<PairMap> truth;
  if (cfg.truth) truth = io::parse_haplotype_file(*cfg.truth);
  const auto inds = gather(files, genotypes, cfg, err);
  const auto ensembles = build_ensembles(inds, cfg, resolve_threads(cfg.threads));
  const OutlierReport report =
      outlier_scores(ensembles, cfg.distance, truth ? &*truth : nullptr, cfg.designated);

  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < report.ranking.size(); ++i) rank[report.ranking[i]] = i + 1;
  for (const OutlierRow& r : report.rows) {
    json rec;
    rec["id"] = r.id;
    rec["distance"] = cfg.distance.name();
    rec["disagreement"] = r.disagreement;
    rec["rank"] = rank.at(r.id);
    if (r.error) rec["switch_error"] = *r.error;
    out << rec.dump() << '\n';
  }
  json summary;
  summary["individuals"] = report.rows.size();
  summary["correlation"] = report.correlation ? json(*report.correlation) : json(nullptr);
  out << summary.dump() << '\n';
  return exit_code::ok;
}

inline int run_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto files = load_methods(cfg.inputs);
  const auto genotypes = load_genotypes(cfg);
  const auto inds = gather(files, genotypes, cfg, err);
  const auto ensembles = build_ensembles(inds, cfg, resolve_threads(cfg.threads));
  const AuditStats stats = approx_audit(ensembles, cfg.distance, cfg.limits);
  for (const AuditRow& r : stats.rows) {
    json rec;
    rec["id"] = r.id;
    rec["distance"] = cfg.distance.name();
    rec["hvp"] = r.hvp;
    rec["hsp"] = r.hsp;
    rec["ratio"] = r.ratio;
    rec["nearest"] = r.nearest;
    out << rec.dump() << '\n';
  }
  json summary;
  summary["individuals"] = stats.rows.size();
  summary["max_ratio"] = stats.max_ratio;
  summary["mean_ratio"] = stats.mean_ratio;
  summary["violations"] = stats.violations;
  out << summary.dump() << '\n';
  if (stats.violations != 0) {
    err << "error: " << stats.violations << " individuals break the HSP/HVP bound\n";
    return exit_code::internal;
  }
  return exit_code::ok;
}

inline int run_simulate(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) throw Error(Errc::InvalidArgument, "simulate needs --out");
  const Population pop = simulate_population(cfg.sim, cfg.individuals, cfg.noise);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = create(dir / "truth.hap");
    io::write_haplotypes(out, pop.truth);
  }
  {
    auto out = create(dir / "genotypes.txt");
    io::write_genotypes(out, pop.genotypes);
  }
  for (std::size_t j = 0; j < pop.methods.size(); ++j) {
    auto out = create(dir / ("method_" + std::to_string(j + 1) + ".hap"));
    io::write_haplotypes(out, pop.methods[j]);
  }
  return exit_code::ok;
}

}  // namespace detail

/// Executes one command. Errors are reported on `err`; the return value is
/// the process exit code.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::Combine: return detail::run_combine(cfg, err);
      case Command::Evaluate: return detail::run_evaluate(cfg, out);
      case Command::Outliers: return detail::run_outliers(cfg, out, err);
      case Command::Audit: return detail::run_audit(cfg, out, err);
      case Command::Simulate: return detail::run_simulate(cfg);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::Validation:
      case Errc::ParseError:
      case Errc::DuplicateId:
      case Errc::LengthMismatch:
      case Errc::MissingTruth:
      case Errc::Alignment:
      case Errc::InvalidArgument:
      case Errc::InvalidK:
      case Errc::EmptyEnsemble:
        return exit_code::validation;
      case Errc::TooLarge:
        return exit_code::internal;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return exit_code::internal;
}

}  // namespace hapcombine::cli
