#pragma once

// Hamming, switch and k-Hamming distances between haplotype pairs.
//
// Every function takes an optional marker mask (mask[i] != 0 excludes marker
// i + 1). Switch and k-Hamming distances work on the het positions passed in,
// which are expected to already exclude masked markers.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hapcombine/core.hpp"
#include "hapcombine/error.hpp"

namespace hapcombine {

class DistanceSpec {
 public:
  enum class Kind { Switch, Hamming, KHamming };

  static DistanceSpec switch_distance() { return DistanceSpec(Kind::Switch, 0); }
  static DistanceSpec hamming() { return DistanceSpec(Kind::Hamming, 0); }
  static DistanceSpec k_hamming(std::size_t k) {
    if (k < 2) throw Error(Errc::InvalidK, "k must be at least 2, got " + std::to_string(k));
    return DistanceSpec(Kind::KHamming, k);
  }

  Kind kind() const noexcept { return kind_; }
  /// Window length; 0 unless kind() is KHamming.
  std::size_t k() const noexcept { return k_; }

  std::string name() const {
    switch (kind_) {
      case Kind::Switch: return "switch";
      case Kind::Hamming: return "hamming";
      case Kind::KHamming: return "khamming";
    }
    return "unknown";
  }

  friend bool operator==(const DistanceSpec&, const DistanceSpec&) = default;

 private:
  DistanceSpec(Kind kind, std::size_t k) : kind_(kind), k_(k) {}

  Kind kind_ = Kind::Switch;
  std::size_t k_ = 0;
};

namespace detail {

inline void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::LengthMismatch,
                "sequences of lengths " + std::to_string(a) + " and " + std::to_string(b));
  }
}

inline void check_mask(std::span<const std::uint8_t> mask, std::size_t m) {
  if (!mask.empty() && mask.size() != m) {
    throw Error(Errc::LengthMismatch, "mask of length " + std::to_string(mask.size()) +
                                          " for " + std::to_string(m) + " markers");
  }
}

/// Pair-Hamming between two genotype-consistent pairs that disagree in phase
/// at `t` of `mprime` het markers (and nowhere else).
constexpr Distance pair_hamming_from_phase(std::size_t t, std::size_t mprime) noexcept {
  return 2 * static_cast<Distance>(std::min(t, mprime - t));
}

}  // namespace detail

inline Distance hamming_seq(std::span<const Allele> a, std::span<const Allele> b,
                            std::span<const std::uint8_t> mask = {}) {
  detail::check_lengths(a.size(), b.size());
  detail::check_mask(mask, a.size());
  Distance d = 0;
  if (mask.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) & (mask[i] == 0);
  }
  return d;
}

/// Minimum over the two ways of pairing the haplotypes.
inline Distance hamming_pair(const HaplotypePair& a, const HaplotypePair& b,
                             std::span<const std::uint8_t> mask = {}) {
  detail::check_lengths(a.size(), b.size());
  const Distance straight = hamming_seq(a.h1(), b.h1(), mask) + hamming_seq(a.h2(), b.h2(), mask);
  const Distance crossed = hamming_seq(a.h1(), b.h2(), mask) + hamming_seq(a.h2(), b.h1(), mask);
  return std::min(straight, crossed);
}

inline Distance switch_distance(const HaplotypePair& a, const HaplotypePair& b,
                                const HetIndex& idx) {
  detail::check_lengths(a.size(), b.size());
  if (idx.size() < 2) return 0;
  const Haplotype& x = a.h1();
  const Haplotype& y = b.h1();
  Distance d = 0;
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    const std::size_t p = idx[j] - 1, q = idx[j + 1] - 1;
    d += (x[p] != x[q]) != (y[p] != y[q]);
  }
  return d;
}

/// Sum over windows of k consecutive het markers of the pair-Hamming distance
/// restricted to the window. Falls back to hamming_pair when m' < k.
inline Distance k_hamming(const HaplotypePair& a, const HaplotypePair& b, std::size_t k,
                          const HetIndex& idx, std::span<const std::uint8_t> mask = {}) {
  if (k < 2) throw Error(Errc::InvalidK, "k must be at least 2, got " + std::to_string(k));
  detail::check_lengths(a.size(), b.size());
  const std::size_t mprime = idx.size();
  if (mprime < k) return hamming_pair(a, b, mask);

  // Sliding sums of both pairings over each window of het markers.
  std::vector<std::uint8_t> straight(mprime), crossed(mprime);
  for (std::size_t j = 0; j < mprime; ++j) {
    const std::size_t p = idx[j] - 1;
    straight[j] = (a.h1()[p] != b.h1()[p]) + (a.h2()[p] != b.h2()[p]);
    crossed[j] = (a.h1()[p] != b.h2()[p]) + (a.h2()[p] != b.h1()[p]);
  }
  Distance s = 0, c = 0;
  for (std::size_t j = 0; j < k; ++j) {
    s += straight[j];
    c += crossed[j];
  }
  Distance d = std::min(s, c);
  for (std::size_t j = k; j < mprime; ++j) {
    s = s + straight[j] - straight[j - k];
    c = c + crossed[j] - crossed[j - k];
    d += std::min(s, c);
  }
  return d;
}

inline Distance distance(const DistanceSpec& spec, const HaplotypePair& a,
                         const HaplotypePair& b, const HetIndex& idx,
                         std::span<const std::uint8_t> mask = {}) {
  switch (spec.kind()) {
    case DistanceSpec::Kind::Switch: return switch_distance(a, b, idx);
    case DistanceSpec::Kind::Hamming: return hamming_pair(a, b, mask);
    case DistanceSpec::Kind::KHamming: return k_hamming(a, b, spec.k(), idx, mask);
  }
  return 0;
}

/// Distance between two members of an ensemble, or a member and a candidate.
inline Distance distance(const DistanceSpec& spec, const Ensemble& e, const HaplotypePair& a,
                         const HaplotypePair& b) {
  return distance(spec, a, b, e.het_index(), e.mask());
}

/// Objective value of `candidate`: sum of distances from every member.
inline Distance ensemble_score(const Ensemble& e, const DistanceSpec& spec,
                               const HaplotypePair& candidate) {
  Distance s = 0;
  for (const Member& m : e.members()) s += distance(spec, e, m.pair, candidate);
  return s;
}

}  // namespace hapcombine
