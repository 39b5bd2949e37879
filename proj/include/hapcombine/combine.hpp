#pragma once

// Selection (HSP) and voting (HVP) combiners.
//
// Every voting solver works on the ensemble's het patterns: a candidate is a
// bit vector x over the active het markers, identified with its complement.
// The canonical representative has x[0] = 0, and the lexicographic tie rule
// picks the smallest canonical pattern. Scores are always recomputed on the
// assembled pair through the distance module.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hapcombine/core.hpp"
#include "hapcombine/distance.hpp"
#include "hapcombine/error.hpp"

namespace hapcombine {

enum class Certificate { ExactByConstruction, ExactByEnumeration, CertifiedOptimal, Heuristic };

inline const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::ExactByConstruction: return "ExactByConstruction";
    case Certificate::ExactByEnumeration: return "ExactByEnumeration";
    case Certificate::CertifiedOptimal: return "CertifiedOptimal";
    case Certificate::Heuristic: return "Heuristic";
  }
  return "Unknown";
}

enum class SolverKind {
  Trivial,
  HspSelect,
  SwitchVote,
  KHammingDp,
  HammingGrayCode,
  HammingEnumeration,
  HammingInducedOrdering,
  BruteForceHvp,
  BruteForceOrderings,
};

inline const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Trivial: return "trivial";
    case SolverKind::HspSelect: return "hsp-select";
    case SolverKind::SwitchVote: return "switch-vote";
    case SolverKind::KHammingDp: return "khamming-dp";
    case SolverKind::HammingGrayCode: return "hamming-graycode";
    case SolverKind::HammingEnumeration: return "hamming-enumeration";
    case SolverKind::HammingInducedOrdering: return "hamming-induced-ordering";
    case SolverKind::BruteForceHvp: return "brute-force-hvp";
    case SolverKind::BruteForceOrderings: return "brute-force-orderings";
  }
  return "unknown";
}

/// How a solver picks among several optimal answers.
///
/// Random draws from a stream derived from (seed, stream); the batch driver
/// sets `stream` to the individual's index so reruns are reproducible.
struct TiePolicy {
  enum class Rule { First, Lexicographic, Random };

  Rule rule = Rule::Lexicographic;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  static TiePolicy first() { return {Rule::First, 0, 0}; }
  static TiePolicy lexicographic() { return {Rule::Lexicographic, 0, 0}; }
  static TiePolicy random(std::uint64_t seed) { return {Rule::Random, seed, 0}; }

  TiePolicy for_individual(std::uint64_t index) const {
    TiePolicy p = *this;
    p.stream = index;
    return p;
  }

  std::mt19937_64 engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
  }
};

struct SolverLimits {
  /// Gray-code sweep over orderings is used when l <= l_max.
  std::size_t l_max = 20;
  /// Candidate enumeration is used when m' <= mprime_max (at most 63).
  std::size_t mprime_max = 20;
  /// Largest window accepted by the k-Hamming dynamic program.
  std::size_t k_max = 16;
};

struct CombineResult {
  HaplotypePair pair;
  Distance score = 0;
  /// Number of distinct optimal pairs; saturates at UINT64_MAX.
  std::uint64_t tie_count = 1;
  SolverKind solver = SolverKind::Trivial;
  Certificate certificate = Certificate::ExactByConstruction;
  /// 0-based index of the selected member (selection mode only).
  std::optional<std::size_t> member;
};

/// Per-member orientation: member i contributes (h2, h1) when bit i is set.
/// An ordering and its complement describe the same assignment.
class OrderingVector {
 public:
  OrderingVector() = default;
  explicit OrderingVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static OrderingVector from_mask(std::uint64_t mask, std::size_t l) {
    std::vector<std::uint8_t> bits(l);
    for (std::size_t i = 0; i < l; ++i) bits[i] = (mask >> i) & 1;
    return OrderingVector(std::move(bits));
  }

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }

  OrderingVector canonical() const {
    if (bits_.empty() || bits_[0] == 0) return *this;
    std::vector<std::uint8_t> flipped(bits_);
    for (auto& b : flipped) b ^= 1;
    return OrderingVector(std::move(flipped));
  }

  friend bool operator==(const OrderingVector& a, const OrderingVector& b) {
    return a.canonical().bits_ == b.canonical().bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

namespace detail {

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
  const std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

inline std::uint64_t saturating_pow2(std::size_t n) noexcept {
  return n >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << n;
}

inline void canonicalize(Haplotype& pattern) {
  if (!pattern.empty() && pattern[0] != 0) {
    for (auto& a : pattern) a ^= 1;
  }
}

inline CombineResult finish(const Ensemble& e, const DistanceSpec& spec, Haplotype pattern,
                            std::uint64_t tie_count, SolverKind solver, Certificate cert) {
  canonicalize(pattern);
  CombineResult r;
  r.pair = e.assemble(pattern);
  r.score = ensemble_score(e, spec, r.pair);
  r.tie_count = tie_count;
  r.solver = solver;
  r.certificate = cert;
  return r;
}

/// Unique answer when at most one het marker is active.
inline CombineResult trivial(const Ensemble& e, const DistanceSpec& spec) {
  return finish(e, spec, Haplotype(e.mprime(), 0), 1, SolverKind::Trivial,
                Certificate::ExactByConstruction);
}

/// Het patterns packed into integers, position 0 in the most significant of
/// `width` bits, so integer order is lexicographic order.
inline std::uint64_t pack(std::span<const Allele> bits) {
  std::uint64_t v = 0;
  for (Allele b : bits) v = (v << 1) | (b & 1);
  return v;
}

inline Haplotype unpack(std::uint64_t v, std::size_t width) {
  Haplotype h(width);
  for (std::size_t j = 0; j < width; ++j) h[j] = (v >> (width - 1 - j)) & 1;
  return h;
}

/// Per-position majority of the oriented first haplotypes; ties to 0.
inline Haplotype oriented_majority(const Ensemble& e, std::span<const std::uint8_t> o) {
  const std::size_t mprime = e.mprime(), l = e.size();
  Haplotype x(mprime);
  for (std::size_t p = 0; p < mprime; ++p) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < l; ++i) ones += e.patterns()[i][p] ^ o[i];
    x[p] = 2 * ones > l ? 1 : 0;
  }
  return x;
}

}  // namespace detail

inline CombineResult select_hsp(const Ensemble& e, const DistanceSpec& spec,
                                const TiePolicy& ties = {}) {
  const std::size_t l = e.size();
  std::vector<Distance> row(l, 0);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j < l; ++j) {
      const Distance d = distance(spec, e, e.members()[i].pair, e.members()[j].pair);
      row[i] += d;
      row[j] += d;
    }
  }
  const Distance best = *std::min_element(row.begin(), row.end());
  std::vector<std::size_t> optima;
  for (std::size_t i = 0; i < l; ++i) {
    if (row[i] == best) optima.push_back(i);
  }

  std::size_t chosen = optima.front();
  switch (ties.rule) {
    case TiePolicy::Rule::First: break;
    case TiePolicy::Rule::Lexicographic: {
      auto key = canonical_orientation(e.members()[chosen].pair).first;
      for (std::size_t i : optima) {
        auto k = canonical_orientation(e.members()[i].pair).first;
        if (k < key) {
          key = std::move(k);
          chosen = i;
        }
      }
      break;
    }
    case TiePolicy::Rule::Random: {
      auto rng = ties.engine();
      chosen = optima[std::uniform_int_distribution<std::size_t>(0, optima.size() - 1)(rng)];
      break;
    }
  }

  CombineResult r;
  r.pair = e.members()[chosen].pair;
  r.score = best;
  r.tie_count = optima.size();
  r.solver = SolverKind::HspSelect;
  r.certificate = Certificate::ExactByEnumeration;
  r.member = chosen;
  return r;
}

/// Exact voting under the switch distance: positionwise majority over the
/// members' switch sequences. O(l m).
inline CombineResult vote_switch(const Ensemble& e, const TiePolicy& ties = {}) {
  const auto spec = DistanceSpec::switch_distance();
  const std::size_t mprime = e.mprime(), l = e.size();
  if (mprime <= 1) return detail::trivial(e, spec);

  std::vector<std::size_t> ones(mprime - 1, 0);
  for (const Haplotype& pat : e.patterns()) {
    for (std::size_t j = 0; j + 1 < mprime; ++j) ones[j] += pat[j] ^ pat[j + 1];
  }

  std::optional<std::mt19937_64> rng;
  if (ties.rule == TiePolicy::Rule::Random) rng = ties.engine();

  Haplotype x(mprime, 0);
  std::size_t tied = 0;
  for (std::size_t j = 0; j + 1 < mprime; ++j) {
    std::uint8_t bit = 2 * ones[j] > l ? 1 : 0;
    if (2 * ones[j] == l) {
      ++tied;
      // First keeps the phase; Lexicographic steers the pattern towards 0,
      // which is greedy-optimal because positions are independent.
      if (rng) {
        bit = static_cast<std::uint8_t>((*rng)() & 1);
      } else if (ties.rule == TiePolicy::Rule::Lexicographic) {
        bit = x[j];
      }
    }
    x[j + 1] = x[j] ^ bit;
  }
  return detail::finish(e, spec, std::move(x), detail::saturating_pow2(tied),
                        SolverKind::SwitchVote, Certificate::ExactByConstruction);
}

/// Voting for a fixed ordering: per-marker majority of the oriented haplotypes.
/// Het votes that tie (even l) go to allele 0 on the first haplotype.
inline HaplotypePair hamming_vote_given_ordering(const Ensemble& e, const OrderingVector& o) {
  if (o.size() != e.size()) {
    throw Error(Errc::LengthMismatch, "ordering of length " + std::to_string(o.size()) +
                                          " for " + std::to_string(e.size()) + " members");
  }
  const Haplotype x = detail::oriented_majority(e, o.bits());
  return e.assemble(x, o.bits());
}

/// True iff every member lies strictly within m'/2 of `result` in pair-Hamming
/// distance. In that case the induced ordering is the optimal one and `result`
/// solves the Hamming voting problem exactly.
inline bool certify_induced_ordering(const Ensemble& e, const HaplotypePair& result) {
  const std::size_t mprime = e.mprime();
  for (const Member& m : e.members()) {
    if (2 * hamming_pair(m.pair, result, e.mask()) >= mprime) return false;
  }
  return true;
}

namespace detail {

/// Gray-code sweep over the 2^(l-1) orderings with member 0 fixed. Flipping a
/// single member updates the per-position vote tallies in O(m').
inline CombineResult hamming_gray(const Ensemble& e, const TiePolicy& ties) {
  const std::size_t mprime = e.mprime(), l = e.size();
  const auto& pats = e.patterns();

  std::vector<std::size_t> ones(mprime, 0);
  for (const Haplotype& pat : pats) {
    for (std::size_t p = 0; p < mprime; ++p) ones[p] += pat[p];
  }
  auto half_cost = [l](std::size_t c) { return std::min(c, l - c); };
  std::size_t cost = 0;
  for (std::size_t c : ones) cost += half_cost(c);

  std::uint64_t o = 0;
  std::size_t best = cost;
  std::vector<std::uint64_t> optimal{0};
  const std::uint64_t steps = std::uint64_t{1} << (l - 1);
  for (std::uint64_t g = 1; g < steps; ++g) {
    const std::size_t i = 1 + static_cast<std::size_t>(std::countr_zero(g));
    const std::uint8_t flipped = (o >> i) & 1;
    o ^= std::uint64_t{1} << i;
    for (std::size_t p = 0; p < mprime; ++p) {
      cost -= half_cost(ones[p]);
      // Oriented bit before the flip was pats[i][p] ^ flipped.
      if ((pats[i][p] ^ flipped) != 0) {
        --ones[p];
      } else {
        ++ones[p];
      }
      cost += half_cost(ones[p]);
    }
    if (cost < best) {
      best = cost;
      optimal.assign(1, o);
    } else if (cost == best) {
      optimal.push_back(o);
    }
  }

  // Expand each optimal ordering into its optimal patterns (free choice at
  // tied positions) and collect the distinct canonical ones.
  constexpr std::size_t kExpansionBudget = std::size_t{1} << 20;
  std::set<Haplotype> distinct;
  std::size_t budget = kExpansionBudget;
  Haplotype first_found;
  for (std::uint64_t mask : optimal) {
    const OrderingVector ov = OrderingVector::from_mask(mask, l);
    Haplotype x = oriented_majority(e, ov.bits());
    std::vector<std::size_t> tied;
    for (std::size_t p = 0; p < mprime; ++p) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < l; ++i) c += pats[i][p] ^ ov[i];
      if (2 * c == l) tied.push_back(p);
    }
    if (first_found.empty()) {
      first_found = x;
      canonicalize(first_found);
    }
    const std::uint64_t combos = saturating_pow2(tied.size());
    for (std::uint64_t t = 0; t < combos && budget > 0; ++t, --budget) {
      Haplotype y = x;
      for (std::size_t b = 0; b < tied.size(); ++b) y[tied[b]] = (t >> b) & 1;
      canonicalize(y);
      distinct.insert(std::move(y));
    }
  }

  Haplotype chosen;
  switch (ties.rule) {
    case TiePolicy::Rule::First: chosen = first_found; break;
    case TiePolicy::Rule::Lexicographic: chosen = *distinct.begin(); break;
    case TiePolicy::Rule::Random: {
      auto rng = ties.engine();
      auto it = distinct.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, distinct.size() - 1)(rng));
      chosen = *it;
      break;
    }
  }
  // FIXME: tie_count is a lower bound once the expansion budget runs out.
  return finish(e, DistanceSpec::hamming(), std::move(chosen), distinct.size(),
                SolverKind::HammingGrayCode, Certificate::ExactByEnumeration);
}

/// Enumeration of all 2^(m'-1) canonical candidate patterns.
inline CombineResult hamming_enumerate(const Ensemble& e, const TiePolicy& ties) {
  const std::size_t mprime = e.mprime();
  std::vector<std::uint64_t> packed;
  packed.reserve(e.size());
  for (const Haplotype& pat : e.patterns()) packed.push_back(pack(pat));

  const std::uint64_t count = std::uint64_t{1} << (mprime - 1);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> optimal;
  for (std::uint64_t x = 0; x < count; ++x) {
    std::uint64_t cost = 0;
    for (std::uint64_t u : packed) {
      const auto t = static_cast<std::size_t>(std::popcount(u ^ x));
      cost += std::min(t, mprime - t);
    }
    if (cost < best) {
      best = cost;
      optimal.assign(1, x);
    } else if (cost == best) {
      optimal.push_back(x);
    }
  }

  std::uint64_t chosen = optimal.front();
  if (ties.rule == TiePolicy::Rule::Random) {
    auto rng = ties.engine();
    chosen = optimal[std::uniform_int_distribution<std::size_t>(0, optimal.size() - 1)(rng)];
  }
  return finish(e, DistanceSpec::hamming(), unpack(chosen, mprime), optimal.size(),
                SolverKind::HammingEnumeration, Certificate::ExactByEnumeration);
}

/// Orients every member against member 0 and votes; certified when every
/// member ends up strictly closer than m'/2.
inline CombineResult hamming_induced(const Ensemble& e) {
  const std::size_t mprime = e.mprime(), l = e.size();
  const auto& pats = e.patterns();
  std::vector<std::uint8_t> o(l, 0);
  for (std::size_t i = 1; i < l; ++i) {
    std::size_t t = 0;
    for (std::size_t p = 0; p < mprime; ++p) t += pats[i][p] != pats[0][p];
    o[i] = 2 * t > mprime ? 1 : 0;
  }
  const HaplotypePair pair = hamming_vote_given_ordering(e, OrderingVector(o));
  const bool certified = certify_induced_ordering(e, pair);
  Haplotype x(mprime);
  for (std::size_t j = 0; j < mprime; ++j) x[j] = pair.h1()[e.het_index()[j] - 1];
  return finish(e, DistanceSpec::hamming(), std::move(x), 1, SolverKind::HammingInducedOrdering,
                certified ? Certificate::CertifiedOptimal : Certificate::Heuristic);
}

}  // namespace detail

/// Voting under the pair-Hamming distance.
///
/// Exact when l <= limits.l_max (Gray-code sweep over orderings) or
/// m' <= limits.mprime_max (candidate enumeration); when both apply the
/// cheaper one runs. Otherwise the ordering induced by the first member is
/// used and the result is certified when possible.
inline CombineResult vote_hamming(const Ensemble& e, const TiePolicy& ties = {},
                                  const SolverLimits& limits = {}) {
  const std::size_t mprime = e.mprime(), l = e.size();
  if (mprime <= 1) return detail::trivial(e, DistanceSpec::hamming());

  const bool gray_ok = l <= std::min<std::size_t>(limits.l_max, 63);
  const bool enum_ok = mprime <= std::min<std::size_t>(limits.mprime_max, 63);
  if (gray_ok && enum_ok) {
    // 2^(l-1) m' against 2^(m'-1) l.
    const double gray_work = std::ldexp(static_cast<double>(mprime), static_cast<int>(l) - 1);
    const double enum_work = std::ldexp(static_cast<double>(l), static_cast<int>(mprime) - 1);
    return gray_work <= enum_work ? detail::hamming_gray(e, ties)
                                  : detail::hamming_enumerate(e, ties);
  }
  if (gray_ok) return detail::hamming_gray(e, ties);
  if (enum_ok) return detail::hamming_enumerate(e, ties);
  return detail::hamming_induced(e);
}

namespace detail {

/// Unordered window pattern {x, ~x} over k het markers, stored as the
/// representative whose first marker carries allele 0. Position 0 is the most
/// significant of the k bits, so canonical patterns index 0 .. 2^(k-1)-1.
struct WindowPattern {
  std::uint32_t bits = 0;

  static WindowPattern canonical(std::uint32_t window, std::size_t k) {
    const std::uint32_t full = (std::uint32_t{1} << k) - 1;
    const std::uint32_t top = std::uint32_t{1} << (k - 1);
    return {(window & top) != 0 ? (~window & full) : window};
  }
};

/// Suffix form of the window recurrence: cost[j][p] is the cheapest total of
/// windows j .. J-1 given that window j carries pattern p, and count[j][p] the
/// number of optimal completions.
struct DPTable {
  std::size_t windows = 0;
  std::size_t states = 0;
  std::vector<Distance> cost;
  std::vector<std::uint64_t> count;

  Distance& cost_at(std::size_t j, std::uint32_t p) { return cost[j * states + p]; }
  std::uint64_t& count_at(std::size_t j, std::uint32_t p) { return count[j * states + p]; }
};

}  // namespace detail

/// Exact voting under the k-Hamming distance by dynamic programming over
/// window patterns. O(l m + 2^k k l (m' - k)). Delegates to vote_hamming when
/// m' < k, where the two distances coincide.
inline CombineResult vote_k_hamming(const Ensemble& e, std::size_t k, const TiePolicy& ties = {},
                                    const SolverLimits& limits = {}) {
  const auto spec = DistanceSpec::k_hamming(k);
  const std::size_t mprime = e.mprime(), l = e.size();
  if (mprime < k) {
    CombineResult r = vote_hamming(e, ties, limits);
    r.score = ensemble_score(e, spec, r.pair);
    return r;
  }
  if (k > limits.k_max || k > 30) {
    throw Error(Errc::TooLarge, "window length " + std::to_string(k) + " exceeds k_max " +
                                    std::to_string(limits.k_max));
  }

  const std::size_t windows = mprime - k + 1;
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  const std::uint32_t states = std::uint32_t{1} << (k - 1);

  // Member windows, oriented as in the member's first haplotype.
  std::vector<std::uint32_t> member_windows(l * windows);
  for (std::size_t i = 0; i < l; ++i) {
    const Haplotype& pat = e.patterns()[i];
    std::uint32_t w = 0;
    for (std::size_t p = 0; p < mprime; ++p) {
      w = ((w << 1) | pat[p]) & full;
      if (p + 1 >= k) member_windows[i * windows + (p + 1 - k)] = w;
    }
  }
  auto window_cost = [&](std::size_t j, std::uint32_t pattern) {
    Distance c = 0;
    for (std::size_t i = 0; i < l; ++i) {
      const auto t = static_cast<std::size_t>(std::popcount(member_windows[i * windows + j] ^ pattern));
      c += detail::pair_hamming_from_phase(t, k);
    }
    return c;
  };
  auto successor = [&](std::uint32_t window, std::uint32_t b) {
    return ((window << 1) & full) | b;
  };

  detail::DPTable table;
  table.windows = windows;
  table.states = states;
  table.cost.assign(windows * states, 0);
  table.count.assign(windows * states, 0);
  for (std::uint32_t p = 0; p < states; ++p) {
    table.cost_at(windows - 1, p) = window_cost(windows - 1, p);
    table.count_at(windows - 1, p) = 1;
  }
  for (std::size_t j = windows - 1; j-- > 0;) {
    for (std::uint32_t p = 0; p < states; ++p) {
      const auto s0 = detail::WindowPattern::canonical(successor(p, 0), k).bits;
      const auto s1 = detail::WindowPattern::canonical(successor(p, 1), k).bits;
      const Distance c0 = table.cost_at(j + 1, s0), c1 = table.cost_at(j + 1, s1);
      const Distance tail = std::min(c0, c1);
      std::uint64_t n = 0;
      if (c0 == tail) n = detail::saturating_add(n, table.count_at(j + 1, s0));
      if (c1 == tail) n = detail::saturating_add(n, table.count_at(j + 1, s1));
      table.cost_at(j, p) = window_cost(j, p) + tail;
      table.count_at(j, p) = n;
    }
  }

  Distance best = std::numeric_limits<Distance>::max();
  for (std::uint32_t p = 0; p < states; ++p) best = std::min(best, table.cost_at(0, p));
  std::uint64_t tie_count = 0;
  for (std::uint32_t p = 0; p < states; ++p) {
    if (table.cost_at(0, p) == best) tie_count = detail::saturating_add(tie_count, table.count_at(0, p));
  }

  // Walk forward choosing among optimal continuations: smallest first for
  // First/Lexicographic (which coincide here), weighted by completion counts
  // for Random so that every optimum is equally likely.
  std::optional<std::mt19937_64> rng;
  if (ties.rule == TiePolicy::Rule::Random) rng = ties.engine();
  auto pick = [&](const std::vector<std::pair<std::uint32_t, std::uint64_t>>& options) {
    if (!rng || options.size() == 1) return options.front().first;
    std::vector<double> weights;
    for (const auto& [value, n] : options) weights.push_back(static_cast<double>(n));
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    return options[dist(*rng)].first;
  };

  std::vector<std::pair<std::uint32_t, std::uint64_t>> options;
  for (std::uint32_t p = 0; p < states; ++p) {
    if (table.cost_at(0, p) == best) options.emplace_back(p, table.count_at(0, p));
  }
  std::uint32_t window = pick(options);
  Haplotype x = detail::unpack(window, k);
  x.reserve(mprime);
  for (std::size_t j = 0; j + 1 < windows; ++j) {
    const auto here = detail::WindowPattern::canonical(window, k).bits;
    const Distance remaining = table.cost_at(j, here) - window_cost(j, here);
    options.clear();
    for (std::uint32_t b = 0; b < 2; ++b) {
      const auto next = detail::WindowPattern::canonical(successor(window, b), k).bits;
      if (table.cost_at(j + 1, next) == remaining) options.emplace_back(b, table.count_at(j + 1, next));
    }
    const std::uint32_t b = pick(options);
    window = successor(window, b);
    x.push_back(static_cast<Allele>(b));
  }

  return detail::finish(e, spec, std::move(x), tie_count, SolverKind::KHammingDp,
                        Certificate::ExactByConstruction);
}

enum class CombineMode { Select, Vote };

inline CombineResult combine(const Ensemble& e, CombineMode mode, const DistanceSpec& spec,
                             const TiePolicy& ties = {}, const SolverLimits& limits = {}) {
  if (mode == CombineMode::Select) return select_hsp(e, spec, ties);
  switch (spec.kind()) {
    case DistanceSpec::Kind::Switch: return vote_switch(e, ties);
    case DistanceSpec::Kind::Hamming: return vote_hamming(e, ties, limits);
    case DistanceSpec::Kind::KHamming: return vote_k_hamming(e, spec.k(), ties, limits);
  }
  throw Error(Errc::InvalidArgument, "unknown distance kind");
}

}  // namespace hapcombine
