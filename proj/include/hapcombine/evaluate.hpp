#pragma once

// Scoring against truth, pairwise method distances, ensemble disagreement as
// an outlier signal, and audits of the selection/voting approximation bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hapcombine/combine.hpp"
#include "hapcombine/core.hpp"
#include "hapcombine/distance.hpp"
#include "hapcombine/error.hpp"

namespace hapcombine {

using PairMap = std::map<std::string, HaplotypePair>;
using GenotypeMap = std::map<std::string, Genotype>;

inline Distance switch_error(const HaplotypePair& pred, const HaplotypePair& truth,
                             const HetIndex& idx) {
  return switch_distance(pred, truth, idx);
}

struct EvalRow {
  std::string id;
  std::size_t mprime = 0;
  Distance switch_error = 0;
  /// switch_error / (m' - 1); 0 when m' <= 1.
  double relative_switch_error = 0.0;
  Distance hamming_error = 0;
  /// hamming_error / (2 m'); 0 when m' = 0.
  double relative_hamming_error = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  Distance total_switch_error = 0;
  Distance total_hamming_error = 0;
  double total_relative_switch_error = 0.0;
  double total_relative_hamming_error = 0.0;
};

namespace detail {

/// Truth and prediction as a two-member ensemble so that Missing resolution
/// and masking follow the same rules as combining.
inline Ensemble truth_ensemble(const std::string& id, const HaplotypePair& truth,
                               const HaplotypePair& pred, const GenotypeMap* genotypes) {
  Genotype g;
  if (genotypes != nullptr) {
    if (auto it = genotypes->find(id); it != genotypes->end()) g = it->second;
  }
  if (g.size() == 0) g = genotype_of(truth, id);
  return Ensemble(std::move(g), {{"truth", truth}, {"pred", pred}}, ValidationPolicy::Lenient);
}

}  // namespace detail

/// Rows come out ordered by id. Truth entries without a prediction are ignored.
inline EvalReport total_error(const PairMap& pred, const PairMap& truth,
                              const GenotypeMap* genotypes = nullptr) {
  EvalReport report;
  for (const auto& [id, p] : pred) {
    auto t = truth.find(id);
    if (t == truth.end()) throw Error(Errc::MissingTruth, "no truth for individual '" + id + "'");
    const Ensemble e = detail::truth_ensemble(id, t->second, p, genotypes);
    EvalRow row;
    row.id = id;
    row.mprime = e.mprime();
    row.switch_error = switch_error(p, t->second, e.het_index());
    row.hamming_error = hamming_pair(p, t->second, e.mask());
    if (row.mprime > 1) {
      row.relative_switch_error =
          static_cast<double>(row.switch_error) / static_cast<double>(row.mprime - 1);
    }
    if (row.mprime > 0) {
      row.relative_hamming_error =
          static_cast<double>(row.hamming_error) / static_cast<double>(2 * row.mprime);
    }
    report.total_switch_error += row.switch_error;
    report.total_hamming_error += row.hamming_error;
    report.total_relative_switch_error += row.relative_switch_error;
    report.total_relative_hamming_error += row.relative_hamming_error;
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct ReconstructionSet {
  std::string label;
  PairMap pairs;
};

using DistanceMatrix = std::vector<std::vector<Distance>>;

/// Entry (a, b) sums the distance between methods a and b over individuals.
inline DistanceMatrix distance_matrix(std::span<const ReconstructionSet> sets,
                                      const DistanceSpec& spec,
                                      const GenotypeMap* genotypes = nullptr) {
  const std::size_t n = sets.size();
  DistanceMatrix mat(n, std::vector<Distance>(n, 0));
  if (n == 0) return mat;
  for (const ReconstructionSet& s : sets) {
    if (s.pairs.size() != sets[0].pairs.size() ||
        !std::equal(s.pairs.begin(), s.pairs.end(), sets[0].pairs.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
      throw Error(Errc::Alignment, "method '" + s.label + "' covers different individuals than '" +
                                       sets[0].label + "'");
    }
  }
  for (const auto& [id, first] : sets[0].pairs) {
    Genotype g;
    if (genotypes != nullptr) {
      if (auto it = genotypes->find(id); it != genotypes->end()) g = it->second;
    }
    if (g.size() == 0) g = genotype_of(first, id);
    std::vector<Member> members;
    for (const ReconstructionSet& s : sets) members.push_back({s.label, s.pairs.at(id)});
    const Ensemble e(std::move(g), std::move(members), ValidationPolicy::Lenient);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const Distance d = distance(spec, e, e.members()[a].pair, e.members()[b].pair);
        mat[a][b] += d;
        mat[b][a] += d;
      }
    }
  }
  return mat;
}

/// Sum of pairwise distances between the members.
inline Distance disagreement(const Ensemble& e, const DistanceSpec& spec) {
  Distance s = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      s += distance(spec, e, e.members()[i].pair, e.members()[j].pair);
    }
  }
  return s;
}

/// Pearson correlation; nullopt when either side has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct OutlierRow {
  std::string id;
  Distance disagreement = 0;
  /// Switch error of the designated member against truth, when supplied.
  std::optional<Distance> error;
};

struct OutlierReport {
  std::vector<OutlierRow> rows;
  /// Ids by decreasing disagreement, ties by id.
  std::vector<std::string> ranking;
  std::optional<double> correlation;
};

/// Disagreement per individual; with truth, correlates it with the switch
/// error of member `designated` of each ensemble.
inline OutlierReport outlier_scores(std::span<const Ensemble> ensembles, const DistanceSpec& spec,
                                    const PairMap* truth = nullptr, std::size_t designated = 0) {
  OutlierReport report;
  std::vector<double> xs, ys;
  for (const Ensemble& e : ensembles) {
    const std::string& id = e.genotype().id();
    if (e.size() < 2) {
      throw Error(Errc::EmptyEnsemble, "individual '" + id + "' needs at least two members");
    }
    OutlierRow row{id, disagreement(e, spec), std::nullopt};
    if (truth != nullptr) {
      auto t = truth->find(id);
      if (t == truth->end()) throw Error(Errc::MissingTruth, "no truth for individual '" + id + "'");
      if (designated >= e.size()) {
        throw Error(Errc::InvalidArgument, "designated member out of range");
      }
      row.error = switch_error(e.members()[designated].pair, t->second, e.het_index());
      xs.push_back(static_cast<double>(row.disagreement));
      ys.push_back(static_cast<double>(*row.error));
    }
    report.rows.push_back(std::move(row));
  }
  std::vector<const OutlierRow*> order;
  for (const OutlierRow& r : report.rows) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const OutlierRow* a, const OutlierRow* b) {
    if (a->disagreement != b->disagreement) return a->disagreement > b->disagreement;
    return a->id < b->id;
  });
  for (const OutlierRow* r : order) report.ranking.push_back(r->id);
  if (truth != nullptr) report.correlation = pearson(xs, ys);
  return report;
}

struct AuditRow {
  std::string id;
  Distance hvp = 0;
  Distance hsp = 0;
  /// hsp / hvp with 0/0 = 1.
  double ratio = 1.0;
  /// Selection score of the member closest to the voting solution.
  Distance nearest = 0;
};

struct AuditStats {
  std::vector<AuditRow> rows;
  double max_ratio = 1.0;
  double mean_ratio = 1.0;
  /// Rows breaking hvp <= hsp <= 2 hvp or nearest <= 2 hsp.
  std::size_t violations = 0;
};

/// Compares selection against exact voting for every ensemble. Throws
/// TooLarge when voting cannot be solved exactly within `limits`.
inline AuditStats approx_audit(std::span<const Ensemble> ensembles, const DistanceSpec& spec,
                               const SolverLimits& limits = {}) {
  AuditStats stats;
  double sum = 0;
  for (const Ensemble& e : ensembles) {
    const CombineResult vote = combine(e, CombineMode::Vote, spec, TiePolicy::lexicographic(), limits);
    if (vote.certificate == Certificate::Heuristic) {
      throw Error(Errc::TooLarge,
                  "voting for '" + e.genotype().id() + "' could not be solved exactly");
    }
    const CombineResult select = select_hsp(e, spec, TiePolicy::lexicographic());

    AuditRow row;
    row.id = e.genotype().id();
    row.hvp = vote.score;
    row.hsp = select.score;
    if (row.hvp == 0) {
      row.ratio = row.hsp == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      row.ratio = static_cast<double>(row.hsp) / static_cast<double>(row.hvp);
    }

    std::size_t nearest = 0;
    Distance nearest_d = std::numeric_limits<Distance>::max();
    for (std::size_t i = 0; i < e.size(); ++i) {
      const Distance d = distance(spec, e, e.members()[i].pair, vote.pair);
      if (d < nearest_d) {
        nearest_d = d;
        nearest = i;
      }
    }
    row.nearest = ensemble_score(e, spec, e.members()[nearest].pair);

    const bool ok = row.hvp <= row.hsp && row.hsp <= 2 * row.hvp && row.hsp <= row.nearest &&
                    row.nearest <= 2 * row.hsp;
    if (!ok) ++stats.violations;
    stats.max_ratio = stats.rows.empty() ? row.ratio : std::max(stats.max_ratio, row.ratio);
    sum += row.ratio;
    stats.rows.push_back(std::move(row));
  }
  if (!stats.rows.empty()) stats.mean_ratio = sum / static_cast<double>(stats.rows.size());
  return stats;
}

}  // namespace hapcombine
