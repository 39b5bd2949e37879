#include <gtest/gtest.h>

#include <random>
#include <set>

#include "test_support.hpp"

namespace hapcombine {
namespace {

using testing::all_het;
using testing::hap;
using testing::pair_of;

TEST(HetPositions, ReadsOffHetCalls) {
  EXPECT_EQ(het_positions(Genotype("g", {Call::Het, Call::Hom0, Call::Het})).positions(),
            (std::vector<std::size_t>{1, 3}));
  EXPECT_TRUE(het_positions(Genotype("g", {Call::Hom0, Call::Hom1})).empty());
  EXPECT_EQ(het_positions(all_het(4)).positions(), (std::vector<std::size_t>{1, 2, 3, 4}));
}

TEST(ValidatePair, ExactMatchAccepted) {
  const auto r = validate_pair(pair_of("01", "10"), all_het(2), ValidationPolicy::Strict);
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(r.violations.empty());
}

TEST(ValidatePair, HomPairAgainstHetCallsRejected) {
  const auto r = validate_pair(pair_of("00", "00"), all_het(2), ValidationPolicy::Strict);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.violations, (std::vector<std::size_t>{1, 2}));
}

TEST(ValidatePair, MissingCallNeverViolates) {
  const Genotype g("g", {Call::Missing, Call::Hom0});
  const auto r = validate_pair(pair_of("00", "10"), g, ValidationPolicy::Strict);
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(r.violations.empty());
}

TEST(ValidatePair, LenientReportsButAccepts) {
  const auto r = validate_pair(pair_of("00", "00"), all_het(2), ValidationPolicy::Lenient);
  EXPECT_TRUE(r.accepted);
  EXPECT_EQ(r.violations.size(), 2u);
}

TEST(ValidatePair, LengthMismatchThrows) {
  try {
    validate_pair(pair_of("010", "101"), all_het(2), ValidationPolicy::Strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
}

TEST(HaplotypePair, UnequalLengthsThrow) { EXPECT_THROW(pair_of("01", "101"), Error); }

TEST(HaplotypePair, EqualityIgnoresOrder) {
  EXPECT_EQ(pair_of("01", "10"), pair_of("10", "01"));
  EXPECT_NE(pair_of("01", "10"), pair_of("00", "11"));
}

TEST(SwitchSequence, EncodesAdjacentHetFlips) {
  const HetIndex idx = het_positions(all_het(4));
  EXPECT_EQ(to_switch_sequence(pair_of("0000", "1111"), idx).bits, hap("000"));
  EXPECT_EQ(to_switch_sequence(pair_of("0011", "1100"), idx).bits, hap("010"));
  EXPECT_EQ(to_switch_sequence(pair_of("0101", "1010"), idx).bits, hap("111"));
}

TEST(SwitchSequence, SkipsHomMarkers) {
  const Genotype g("g", {Call::Het, Call::Hom1, Call::Het, Call::Hom0, Call::Het});
  EXPECT_EQ(to_switch_sequence(pair_of("01100", "11001"), het_positions(g)).bits, hap("11"));
}

TEST(SwitchSequence, DecodesInverseOfEncoding) {
  const Genotype g = all_het(4);
  EXPECT_EQ(from_switch_sequence({hap("010")}, g, 0), pair_of("0011", "1100"));
  EXPECT_EQ(from_switch_sequence({}, all_het(1), 0), pair_of("0", "1"));
  EXPECT_EQ(from_switch_sequence({hap("000")}, g, 1), pair_of("0000", "1111"));
  const auto p = from_switch_sequence({hap("010")}, g, 0);
  EXPECT_EQ(p.h1(), hap("0011"));
}

TEST(SwitchSequence, DecodeRejectsWrongLengthAndMissing) {
  EXPECT_THROW(from_switch_sequence({hap("01")}, all_het(4), 0), Error);
  const Genotype g("g", {Call::Het, Call::Missing, Call::Het});
  EXPECT_THROW(from_switch_sequence({hap("0")}, g, 0), Error);
}

TEST(CanonicalOrientation, SmallerFirst) {
  auto [a, b] = canonical_orientation(pair_of("10", "01"));
  EXPECT_EQ(a, hap("01"));
  EXPECT_EQ(b, hap("10"));
  EXPECT_EQ(canonical_orientation(pair_of("0", "1")).first, hap("0"));
  EXPECT_EQ(canonical_orientation(pair_of("0011", "1100")).first, hap("0011"));
}

TEST(CoreProperties, RoundTripOrientationAndComplement) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 1 + rng() % 16;
    const Genotype g = testing::random_genotype(rng, m, 0.5);
    const HaplotypePair p = testing::random_pair(rng, g);
    const HetIndex idx = het_positions(g);
    ASSERT_TRUE(validate_pair(p, g, ValidationPolicy::Strict).accepted);
    const SwitchSequence s = to_switch_sequence(p, idx);
    EXPECT_EQ(s, to_switch_sequence(p.swapped(), idx));
    for (std::size_t pos : idx.positions()) EXPECT_NE(p.h1()[pos - 1], p.h2()[pos - 1]);
    if (!idx.empty()) {
      const Allele anchor = p.h1()[idx[0] - 1];
      EXPECT_EQ(from_switch_sequence(s, g, anchor), p);
      EXPECT_EQ(from_switch_sequence(s, g, anchor ^ 1), p);
      EXPECT_EQ(to_switch_sequence(from_switch_sequence(s, g, 0), idx), s);
    }
  }
}

TEST(CoreProperties, ConsistentPairCountIsPowerOfTwo) {
  std::mt19937_64 rng(11);
  for (std::size_t mprime = 1; mprime <= 12; ++mprime) {
    const Genotype g = testing::genotype_with_hets(rng, mprime + 2, mprime);
    // Every assignment of alleles to the het markers, deduplicated as
    // unordered pairs.
    std::set<std::pair<Haplotype, Haplotype>> distinct;
    const HetIndex idx = het_positions(g);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << mprime); ++v) {
      Haplotype h1(g.size()), h2(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) h1[i] = h2[i] = hom_allele(g.calls()[i]);
      for (std::size_t j = 0; j < mprime; ++j) {
        h1[idx[j] - 1] = (v >> j) & 1;
        h2[idx[j] - 1] = h1[idx[j] - 1] ^ 1;
      }
      const HaplotypePair p(h1, h2);
      ASSERT_TRUE(validate_pair(p, g, ValidationPolicy::Strict).accepted);
      distinct.insert(canonical_orientation(p));
    }
    EXPECT_EQ(distinct.size(), std::size_t{1} << (mprime - 1)) << "m' = " << mprime;
  }
}

TEST(Ensemble, RejectsEmptyAndInvalidMembers) {
  try {
    Ensemble(all_het(2), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyEnsemble);
  }
  try {
    testing::ensemble_of(all_het(2), {pair_of("01", "10"), pair_of("00", "00")});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.member(), "m2");
    EXPECT_EQ(e.markers(), (std::vector<std::size_t>{1, 2}));
  }
}

TEST(Ensemble, LenientMasksViolations) {
  const Genotype g = all_het(4);
  const Ensemble e = testing::ensemble_of(g, {pair_of("0000", "1111"), pair_of("0100", "1111")},
                                          ValidationPolicy::Lenient);
  EXPECT_EQ(e.het_index().positions(), (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_EQ(e.mask()[1], 1);
  EXPECT_EQ(hamming_pair(e.members()[0].pair, e.members()[1].pair, e.mask()), 0u);
}

TEST(Ensemble, ResolvesMissingByMajority) {
  const Genotype g("g", {Call::Het, Call::Missing, Call::Missing, Call::Het});
  const Ensemble e = testing::ensemble_of(
      g, {pair_of("0100", "1101"), pair_of("0100", "1111"), pair_of("0010", "1111")});
  // One het vote of three at both markers -> hom, allele of member 1.
  ASSERT_EQ(e.resolutions().size(), 2u);
  EXPECT_EQ(e.resolutions()[0].marker, 2u);
  EXPECT_EQ(e.resolutions()[0].resolved, Call::Hom1);
  EXPECT_EQ(e.resolutions()[1].resolved, Call::Hom0);
  EXPECT_EQ(e.resolved_genotype().calls()[1], Call::Hom1);
  // Members disagreeing with the resolved call mask the marker.
  EXPECT_EQ(e.mask()[1], 1);
  EXPECT_EQ(e.mask()[2], 1);
  EXPECT_EQ(e.mprime(), 2u);
}

TEST(Ensemble, MissingTieResolvesToHomOfFirstHomMember) {
  const Genotype g("g", {Call::Het, Call::Missing});
  const Ensemble e = testing::ensemble_of(g, {pair_of("01", "10"), pair_of("01", "11")});
  EXPECT_EQ(e.resolved_genotype().calls()[1], Call::Hom1);
  EXPECT_EQ(e.mask()[1], 1);
}

TEST(Ensemble, MissingResolvedHetJoinsActiveIndex) {
  const Genotype g("g", {Call::Het, Call::Missing, Call::Het});
  const Ensemble e = testing::ensemble_of(
      g, {pair_of("010", "101"), pair_of("011", "100"), pair_of("000", "111")});
  EXPECT_EQ(e.resolved_genotype().calls()[1], Call::Het);
  EXPECT_EQ(e.het_index().positions(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_FALSE(e.has_mask());
}

}  // namespace
}  // namespace hapcombine
