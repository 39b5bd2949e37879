#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace hapcombine {
namespace {

using testing::all_het;
using testing::fixture_a;
using testing::fixture_b;
using testing::fixture_c;
using testing::hap;
using testing::pair_of;

TEST(HammingSeq, CountsDisagreements) {
  EXPECT_EQ(hamming_seq(hap("0000"), hap("0000")), 0u);
  EXPECT_EQ(hamming_seq(hap("0000"), hap("1111")), 4u);
  EXPECT_EQ(hamming_seq(hap("0011"), hap("0101")), 2u);
}

TEST(HammingSeq, LengthMismatch) {
  try {
    hamming_seq(hap("01"), hap("011"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
}

TEST(HammingPair, MinOverPairings) {
  EXPECT_EQ(hamming_pair(fixture_a(), fixture_a()), 0u);
  EXPECT_EQ(hamming_pair(fixture_a(), fixture_b()), 4u);
  EXPECT_EQ(hamming_pair(pair_of("000", "101"), pair_of("001", "100")), 2u);
  EXPECT_EQ(hamming_pair(pair_of("01", "10"), pair_of("10", "01")), 0u);
}

TEST(SwitchDistance, FixtureValues) {
  const HetIndex idx = het_positions(all_het(4));
  EXPECT_EQ(switch_distance(fixture_a(), fixture_b(), idx), 1u);
  EXPECT_EQ(switch_distance(fixture_a(), fixture_c(), idx), 3u);
  EXPECT_EQ(switch_distance(fixture_b(), fixture_c(), idx), 2u);
  EXPECT_EQ(switch_distance(fixture_a(), fixture_a(), idx), 0u);
}

TEST(SwitchDistance, ZeroBelowTwoHets) {
  const Genotype g("g", {Call::Het, Call::Hom0});
  EXPECT_EQ(switch_distance(pair_of("00", "10"), pair_of("10", "00"), het_positions(g)), 0u);
}

TEST(KHamming, FixtureValues) {
  const HetIndex idx = het_positions(all_het(4));
  EXPECT_EQ(k_hamming(fixture_a(), fixture_b(), 2, idx), 2u);
  EXPECT_EQ(k_hamming(fixture_a(), fixture_b(), 3, idx), 4u);
  EXPECT_EQ(k_hamming(fixture_a(), fixture_b(), 4, idx), 4u);
  EXPECT_EQ(k_hamming(fixture_a(), fixture_b(), 5, idx), hamming_pair(fixture_a(), fixture_b()));
}

TEST(KHamming, RejectsSmallK) {
  const HetIndex idx = het_positions(all_het(4));
  try {
    k_hamming(fixture_a(), fixture_b(), 1, idx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidK);
  }
  EXPECT_THROW(DistanceSpec::k_hamming(1), Error);
}

TEST(DistanceDispatch, RoutesBySpec) {
  const HetIndex idx = het_positions(all_het(4));
  const auto a = fixture_a(), b = fixture_b();
  EXPECT_EQ(distance(DistanceSpec::switch_distance(), a, a, idx), 0u);
  EXPECT_EQ(distance(DistanceSpec::k_hamming(2), a, b, idx),
            2 * distance(DistanceSpec::switch_distance(), a, b, idx));
  EXPECT_EQ(distance(DistanceSpec::hamming(), a, b, idx), 4u);
}

TEST(Masking, MaskedMarkersIgnored) {
  const std::vector<std::uint8_t> mask{0, 1, 0};
  EXPECT_EQ(hamming_seq(hap("010"), hap("000"), mask), 0u);
  EXPECT_EQ(hamming_pair(pair_of("010", "101"), pair_of("000", "111"), mask), 0u);
}

struct Triple {
  Genotype g;
  HetIndex idx;
  HaplotypePair a, b, c;
};

Triple random_triple(std::mt19937_64& rng) {
  const std::size_t m = 1 + rng() % 16;
  Genotype g = testing::random_genotype(rng, m, 0.6);
  HetIndex idx = het_positions(g);
  return {g, idx, testing::random_pair(rng, g), testing::random_pair(rng, g),
          testing::random_pair(rng, g)};
}

TEST(DistanceProperties, MetricAxioms) {
  std::mt19937_64 rng(2024);
  const std::vector<DistanceSpec> specs{DistanceSpec::switch_distance(), DistanceSpec::hamming(),
                                        DistanceSpec::k_hamming(2), DistanceSpec::k_hamming(3),
                                        DistanceSpec::k_hamming(5)};
  for (int trial = 0; trial < 3000; ++trial) {
    const Triple t = random_triple(rng);
    for (const auto& spec : specs) {
      const auto ab = distance(spec, t.a, t.b, t.idx);
      const auto ba = distance(spec, t.b, t.a, t.idx);
      const auto ac = distance(spec, t.a, t.c, t.idx);
      const auto bc = distance(spec, t.b, t.c, t.idx);
      EXPECT_EQ(ab, ba);
      EXPECT_EQ(distance(spec, t.a, t.a.swapped(), t.idx), 0u);
      EXPECT_LE(ab, ac + bc);
      if (t.idx.size() >= 2 && ab == 0) {
        EXPECT_EQ(t.a, t.b) << spec.name();
      }
    }
  }
}

TEST(DistanceProperties, AgreeWithPhaseOracles) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    const Triple t = random_triple(rng);
    const Haplotype x = testing::canonical_pattern(t.a, t.idx);
    const Haplotype y = testing::canonical_pattern(t.b, t.idx);
    EXPECT_EQ(hamming_pair(t.a, t.b), testing::pair_hamming_oracle(x, y));
    EXPECT_EQ(switch_distance(t.a, t.b, t.idx), testing::switch_oracle(x, y));
    for (std::size_t k = 2; k <= 6; ++k) {
      EXPECT_EQ(k_hamming(t.a, t.b, k, t.idx), testing::k_hamming_oracle(x, y, k));
    }
  }
}

TEST(DistanceProperties, InterpolationEndpoints) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const Triple t = random_triple(rng);
    const std::size_t mprime = t.idx.size();
    if (mprime >= 2) {
      EXPECT_EQ(k_hamming(t.a, t.b, 2, t.idx), 2 * switch_distance(t.a, t.b, t.idx));
      EXPECT_EQ(k_hamming(t.a, t.b, mprime, t.idx), hamming_pair(t.a, t.b));
    }
  }
}

}  // namespace
}  // namespace hapcombine
