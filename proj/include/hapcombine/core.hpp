#pragma once

// Domain types: genotypes, unordered haplotype pairs, heterozygous marker
// indexing and the switch-sequence encoding.
//
// Marker numbers exposed through the public API are 1-based. Containers are
// 0-based, so marker `p` lives at offset `p - 1`.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hapcombine/error.hpp"

namespace hapcombine {

using Allele = std::uint8_t;
using Haplotype = std::vector<Allele>;
using Distance = std::uint64_t;

enum class Call : std::uint8_t { Hom0, Het, Hom1, Missing };

inline bool is_hom(Call c) noexcept { return c == Call::Hom0 || c == Call::Hom1; }
inline Allele hom_allele(Call c) noexcept { return c == Call::Hom1 ? 1 : 0; }

/// The unphased call implied by two alleles.
inline Call call_of(Allele a, Allele b) noexcept {
  if (a != b) return Call::Het;
  return a == 0 ? Call::Hom0 : Call::Hom1;
}

class Genotype {
 public:
  Genotype() = default;
  Genotype(std::string id, std::vector<Call> calls)
      : id_(std::move(id)), calls_(std::move(calls)) {
    het_count_ = static_cast<std::size_t>(
        std::count(calls_.begin(), calls_.end(), Call::Het));
  }

  const std::string& id() const noexcept { return id_; }
  const std::vector<Call>& calls() const noexcept { return calls_; }
  std::size_t size() const noexcept { return calls_.size(); }
  std::size_t het_count() const noexcept { return het_count_; }

  bool has_missing() const noexcept {
    return std::find(calls_.begin(), calls_.end(), Call::Missing) != calls_.end();
  }

  /// 1-based marker access.
  Call at(std::size_t marker) const { return calls_.at(marker - 1); }

  friend bool operator==(const Genotype&, const Genotype&) = default;

 private:
  std::string id_;
  std::vector<Call> calls_;
  std::size_t het_count_ = 0;
};

/// Strictly increasing 1-based positions of the heterozygous markers.
class HetIndex {
 public:
  HetIndex() = default;
  explicit HetIndex(std::vector<std::size_t> positions)
      : positions_(std::move(positions)) {}

  const std::vector<std::size_t>& positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  bool empty() const noexcept { return positions_.empty(); }
  std::size_t operator[](std::size_t j) const noexcept { return positions_[j]; }

  friend bool operator==(const HetIndex&, const HetIndex&) = default;

 private:
  std::vector<std::size_t> positions_;
};

/// Unordered pair of haplotypes. Equality ignores the order of the two.
class HaplotypePair {
 public:
  HaplotypePair() = default;
  HaplotypePair(Haplotype h1, Haplotype h2) : h1_(std::move(h1)), h2_(std::move(h2)) {
    if (h1_.size() != h2_.size()) {
      throw Error(Errc::LengthMismatch,
                  "haplotypes of lengths " + std::to_string(h1_.size()) + " and " +
                      std::to_string(h2_.size()));
    }
  }

  const Haplotype& h1() const noexcept { return h1_; }
  const Haplotype& h2() const noexcept { return h2_; }
  std::size_t size() const noexcept { return h1_.size(); }

  HaplotypePair swapped() const { return HaplotypePair(h2_, h1_); }

  friend bool operator==(const HaplotypePair& a, const HaplotypePair& b) {
    return (a.h1_ == b.h1_ && a.h2_ == b.h2_) || (a.h1_ == b.h2_ && a.h2_ == b.h1_);
  }

 private:
  Haplotype h1_;
  Haplotype h2_;
};

struct SwitchSequence {
  std::vector<std::uint8_t> bits;

  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const SwitchSequence&, const SwitchSequence&) = default;
};

enum class ValidationPolicy { Strict, Lenient };

struct ValidationReport {
  bool accepted = true;
  /// 1-based markers where the pair contradicts a non-Missing call.
  std::vector<std::size_t> violations;
};

inline HetIndex het_positions(const Genotype& g) {
  std::vector<std::size_t> pos;
  pos.reserve(g.het_count());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.calls()[i] == Call::Het) pos.push_back(i + 1);
  }
  return HetIndex(std::move(pos));
}

/// Under the lenient policy the pair is always accepted and the violating
/// markers are reported so that callers can mask them.
inline ValidationReport validate_pair(const HaplotypePair& p, const Genotype& g,
                                      ValidationPolicy policy) {
  if (p.size() != g.size()) {
    throw Error(Errc::LengthMismatch, "pair has " + std::to_string(p.size()) +
                                          " markers, genotype '" + g.id() + "' has " +
                                          std::to_string(g.size()));
  }
  ValidationReport report;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Call c = g.calls()[i];
    if (c == Call::Missing) continue;
    if (call_of(p.h1()[i], p.h2()[i]) != c) report.violations.push_back(i + 1);
  }
  report.accepted = policy == ValidationPolicy::Lenient || report.violations.empty();
  return report;
}

inline SwitchSequence to_switch_sequence(const HaplotypePair& p, const HetIndex& idx) {
  SwitchSequence s;
  if (idx.size() < 2) return s;
  s.bits.resize(idx.size() - 1);
  const Haplotype& h = p.h1();
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    s.bits[j] = h[idx[j] - 1] != h[idx[j + 1] - 1] ? 1 : 0;
  }
  return s;
}

/// Decodes a switch sequence against a genotype without Missing calls.
/// `anchor` is the first haplotype's allele at the first het marker.
inline HaplotypePair from_switch_sequence(const SwitchSequence& s, const Genotype& g,
                                          Allele anchor) {
  const std::size_t mprime = g.het_count();
  const std::size_t expected = mprime == 0 ? 0 : mprime - 1;
  if (s.size() != expected) {
    throw Error(Errc::LengthMismatch, "switch sequence of length " +
                                          std::to_string(s.size()) + ", expected " +
                                          std::to_string(expected));
  }
  if (g.has_missing()) {
    throw Error(Errc::InvalidArgument,
                "genotype '" + g.id() + "' has Missing calls; resolve them first");
  }
  Haplotype h1(g.size()), h2(g.size());
  Allele phase = anchor & 1;
  std::size_t j = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Call c = g.calls()[i];
    if (c == Call::Het) {
      if (j > 0 && s.bits[j - 1] != 0) phase ^= 1;
      h1[i] = phase;
      h2[i] = phase ^ 1;
      ++j;
    } else {
      h1[i] = h2[i] = hom_allele(c);
    }
  }
  return HaplotypePair(std::move(h1), std::move(h2));
}

/// Lexicographically smaller haplotype first.
inline std::pair<Haplotype, Haplotype> canonical_orientation(const HaplotypePair& p) {
  if (p.h2() < p.h1()) return {p.h2(), p.h1()};
  return {p.h1(), p.h2()};
}

/// Genotype implied by a phased pair.
inline Genotype genotype_of(const HaplotypePair& p, std::string id = {}) {
  std::vector<Call> calls(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) calls[i] = call_of(p.h1()[i], p.h2()[i]);
  return Genotype(std::move(id), std::move(calls));
}

struct Member {
  std::string label;
  HaplotypePair pair;
};

/// The l reconstructions of one individual, validated against its genotype.
///
/// Missing genotype calls are resolved by majority over the members' local
/// het/hom status; a tie resolves to hom, taking the allele of the first member
/// that is homozygous there. Markers where some member disagrees with the
/// resolved call are masked (excluded from every distance), as are lenient
/// violations. The active het index is the unmasked set of resolved het
/// markers; `patterns()` holds each member's first haplotype projected onto it.
class Ensemble {
 public:
  struct Resolution {
    std::size_t marker;  // 1-based
    Call resolved;
  };

  Ensemble(Genotype genotype, std::vector<Member> members,
           ValidationPolicy policy = ValidationPolicy::Strict)
      : genotype_(std::move(genotype)), members_(std::move(members)) {
    if (members_.empty()) {
      throw Error(Errc::EmptyEnsemble, "individual '" + genotype_.id() + "' has no members");
    }
    const std::size_t m = genotype_.size();
    mask_.assign(m, 0);
    for (const Member& mem : members_) {
      ValidationReport r = validate_pair(mem.pair, genotype_, policy);
      if (!r.accepted) throw ValidationError(mem.label, std::move(r.violations));
      for (std::size_t marker : r.violations) mask_[marker - 1] = 1;
    }

    std::vector<Call> resolved = genotype_.calls();
    for (std::size_t i = 0; i < m; ++i) {
      if (resolved[i] != Call::Missing) continue;
      std::size_t het_votes = 0;
      const Member* first_hom = nullptr;
      for (const Member& mem : members_) {
        const Allele a = mem.pair.h1()[i], b = mem.pair.h2()[i];
        if (a != b) {
          ++het_votes;
        } else if (first_hom == nullptr) {
          first_hom = &mem;
        }
      }
      if (2 * het_votes > members_.size()) {
        resolved[i] = Call::Het;
      } else {
        resolved[i] = first_hom->pair.h1()[i] == 0 ? Call::Hom0 : Call::Hom1;
      }
      resolutions_.push_back({i + 1, resolved[i]});
      for (const Member& mem : members_) {
        if (call_of(mem.pair.h1()[i], mem.pair.h2()[i]) != resolved[i]) mask_[i] = 1;
      }
    }
    resolved_ = Genotype(genotype_.id(), std::move(resolved));

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < m; ++i) {
      if (resolved_.calls()[i] == Call::Het && mask_[i] == 0) active.push_back(i + 1);
    }
    het_index_ = HetIndex(std::move(active));

    patterns_.reserve(members_.size());
    for (const Member& mem : members_) {
      Haplotype pat(het_index_.size());
      for (std::size_t j = 0; j < het_index_.size(); ++j) {
        pat[j] = mem.pair.h1()[het_index_[j] - 1];
      }
      patterns_.push_back(std::move(pat));
    }
  }

  const Genotype& genotype() const noexcept { return genotype_; }
  /// Genotype with every Missing call resolved.
  const Genotype& resolved_genotype() const noexcept { return resolved_; }
  const std::vector<Resolution>& resolutions() const noexcept { return resolutions_; }
  const std::vector<Member>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t markers() const noexcept { return genotype_.size(); }
  const HetIndex& het_index() const noexcept { return het_index_; }
  std::size_t mprime() const noexcept { return het_index_.size(); }
  /// mask()[i] != 0 excludes marker i + 1 from distance computations.
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }
  bool has_mask() const noexcept {
    return std::find(mask_.begin(), mask_.end(), 1) != mask_.end();
  }
  const std::vector<Haplotype>& patterns() const noexcept { return patterns_; }

  /// Builds the full pair whose first haplotype carries `pattern` on the active
  /// het markers. Resolved hom markers take their allele; masked het markers
  /// take the per-marker majority of the members oriented towards `pattern`
  /// (ties to allele 0 on the first haplotype).
  HaplotypePair assemble(std::span<const Allele> pattern) const {
    std::vector<std::uint8_t> flip(members_.size(), 0);
    if (has_mask()) {
      for (std::size_t i = 0; i < members_.size(); ++i) {
        std::size_t t = 0;
        for (std::size_t j = 0; j < pattern.size(); ++j) t += patterns_[i][j] != pattern[j];
        flip[i] = 2 * t > pattern.size() ? 1 : 0;
      }
    }
    return assemble(pattern, flip);
  }

  /// As above with an explicit per-member orientation for masked het markers.
  HaplotypePair assemble(std::span<const Allele> pattern,
                         std::span<const std::uint8_t> flip) const {
    const std::size_t m = markers();
    Haplotype h1(m), h2(m);
    std::size_t j = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Call c = resolved_.calls()[i];
      if (c != Call::Het) {
        h1[i] = h2[i] = hom_allele(c);
      } else if (mask_[i] == 0) {
        h1[i] = pattern[j++];
        h2[i] = h1[i] ^ 1;
      } else {
        std::size_t ones = 0;
        for (std::size_t k = 0; k < members_.size(); ++k) {
          const HaplotypePair& p = members_[k].pair;
          ones += (flip[k] != 0 ? p.h2()[i] : p.h1()[i]);
        }
        h1[i] = 2 * ones > members_.size() ? 1 : 0;
        h2[i] = h1[i] ^ 1;
      }
    }
    return HaplotypePair(std::move(h1), std::move(h2));
  }

 private:
  Genotype genotype_;
  Genotype resolved_;
  std::vector<Resolution> resolutions_;
  std::vector<Member> members_;
  std::vector<std::uint8_t> mask_;
  HetIndex het_index_;
  std::vector<Haplotype> patterns_;
};

}  // namespace hapcombine
