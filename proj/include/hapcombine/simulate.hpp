#pragma once

// Synthetic truth, noise models for baseline-haplotyper errors, and the
// brute-force oracles used to check the solvers on small instances.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hapcombine/combine.hpp"
#include "hapcombine/core.hpp"
#include "hapcombine/distance.hpp"
#include "hapcombine/error.hpp"

namespace hapcombine {

struct NoiseSpec {
  enum class Kind { Switch, Allele };

  Kind kind = Kind::Switch;
  double p = 0.0;

  static NoiseSpec switches(double p) { return make(Kind::Switch, p); }
  static NoiseSpec alleles(double p) { return make(Kind::Allele, p); }

 private:
  static NoiseSpec make(Kind kind, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::InvalidArgument, "noise probability must lie in [0,1]");
    }
    return {kind, p};
  }
};

struct SimConfig {
  std::size_t m = 100;
  /// Expected fraction of heterozygous markers.
  double het_fraction = 0.322;
  std::size_t l = 5;
  std::uint64_t seed = 1;
};

/// Independent stream for (seed, stream index).
inline std::mt19937_64 derive_engine(std::uint64_t seed, std::uint64_t stream) {
  return TiePolicy{TiePolicy::Rule::Random, seed, stream}.engine();
}

struct Truth {
  Genotype genotype;
  HaplotypePair pair;
};

inline Truth gen_truth(const SimConfig& cfg, std::mt19937_64& rng, std::string id = "ind") {
  if (cfg.m == 0 || cfg.l == 0) throw Error(Errc::InvalidArgument, "m and l must be positive");
  std::bernoulli_distribution het(cfg.het_fraction);
  std::bernoulli_distribution coin(0.5);
  std::vector<Call> calls(cfg.m);
  Haplotype h1(cfg.m), h2(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    if (het(rng)) {
      calls[i] = Call::Het;
      h1[i] = coin(rng) ? 1 : 0;
      h2[i] = h1[i] ^ 1;
    } else {
      calls[i] = coin(rng) ? Call::Hom1 : Call::Hom0;
      h1[i] = h2[i] = hom_allele(calls[i]);
    }
  }
  return {Genotype(std::move(id), std::move(calls)), HaplotypePair(std::move(h1), std::move(h2))};
}

inline HaplotypePair perturb(const HaplotypePair& p, const Genotype& g, const NoiseSpec& noise,
                             std::mt19937_64& rng) {
  std::bernoulli_distribution flip(noise.p);
  const HetIndex idx = het_positions(g);
  if (noise.kind == NoiseSpec::Kind::Switch) {
    if (idx.empty()) return p;
    SwitchSequence s = to_switch_sequence(p, idx);
    for (auto& b : s.bits) b ^= flip(rng) ? 1 : 0;
    return from_switch_sequence(s, g, p.h1()[idx[0] - 1]);
  }
  Haplotype h1 = p.h1(), h2 = p.h2();
  for (std::size_t pos : idx.positions()) {
    if (flip(rng)) std::swap(h1[pos - 1], h2[pos - 1]);
  }
  return HaplotypePair(std::move(h1), std::move(h2));
}

/// A simulated population: truth, genotypes and l noisy reconstructions per
/// individual. Individual n draws from stream n of cfg.seed.
struct Population {
  std::map<std::string, Genotype> genotypes;
  std::map<std::string, HaplotypePair> truth;
  /// methods[j] maps id -> reconstruction of method j.
  std::vector<std::map<std::string, HaplotypePair>> methods;
};

inline std::string individual_name(std::size_t n) {
  std::string digits = std::to_string(n);
  return "ind" + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

inline Population simulate_population(const SimConfig& cfg, std::size_t individuals,
                                      const NoiseSpec& noise) {
  Population pop;
  pop.methods.resize(cfg.l);
  for (std::size_t n = 0; n < individuals; ++n) {
    auto rng = derive_engine(cfg.seed, n);
    const std::string id = individual_name(n + 1);
    Truth t = gen_truth(cfg, rng, id);
    for (std::size_t j = 0; j < cfg.l; ++j) {
      pop.methods[j].emplace(id, perturb(t.pair, t.genotype, noise, rng));
    }
    pop.genotypes.emplace(id, t.genotype);
    pop.truth.emplace(id, std::move(t.pair));
  }
  return pop;
}

/// Exhaustive voting oracle: scores every one of the 2^(m'-1) candidate pairs
/// with the distance module. The representative is the lexicographically
/// smallest optimum.
inline CombineResult brute_force_hvp(const Ensemble& e, const DistanceSpec& spec,
                                     std::size_t guard = 20) {
  const std::size_t mprime = e.mprime();
  if (mprime > guard || mprime > 62) {
    throw Error(Errc::TooLarge, "m' = " + std::to_string(mprime) + " exceeds the guard " +
                                    std::to_string(guard));
  }
  const std::uint64_t count = mprime == 0 ? 1 : std::uint64_t{1} << (mprime - 1);
  CombineResult best;
  best.score = std::numeric_limits<Distance>::max();
  best.tie_count = 0;
  best.solver = SolverKind::BruteForceHvp;
  best.certificate = Certificate::ExactByEnumeration;
  for (std::uint64_t x = 0; x < count; ++x) {
    Haplotype pattern(mprime);
    for (std::size_t j = 0; j < mprime; ++j) pattern[j] = (x >> (mprime - 1 - j)) & 1;
    HaplotypePair cand = e.assemble(pattern);
    const Distance s = ensemble_score(e, spec, cand);
    if (s < best.score) {
      best.score = s;
      best.pair = std::move(cand);
      best.tie_count = 1;
    } else if (s == best.score) {
      ++best.tie_count;
    }
  }
  return best;
}

/// Naive sweep over the 2^(l-1) orderings, voting each one from scratch.
/// tie_count is the number of distinct optimal pairs the sweep produces.
inline CombineResult brute_force_orderings(const Ensemble& e, std::size_t guard = 20) {
  const std::size_t l = e.size();
  if (l > guard || l > 62) {
    throw Error(Errc::TooLarge, "l = " + std::to_string(l) + " exceeds the guard " +
                                    std::to_string(guard));
  }
  const auto spec = DistanceSpec::hamming();
  CombineResult best;
  best.score = std::numeric_limits<Distance>::max();
  best.solver = SolverKind::BruteForceOrderings;
  best.certificate = Certificate::ExactByEnumeration;
  std::vector<HaplotypePair> optima;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (l - 1)); ++mask) {
    const auto o = OrderingVector::from_mask(mask << 1, l);
    HaplotypePair cand = hamming_vote_given_ordering(e, o);
    const Distance s = ensemble_score(e, spec, cand);
    if (s < best.score) {
      best.score = s;
      optima.assign(1, cand);
    } else if (s == best.score &&
               std::find(optima.begin(), optima.end(), cand) == optima.end()) {
      optima.push_back(cand);
    }
  }
  best.pair = optima.front();
  best.tie_count = optima.size();
  return best;
}

}  // namespace hapcombine
