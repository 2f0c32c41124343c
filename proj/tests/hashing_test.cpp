#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "lone/hashing.hpp"

namespace lone {
namespace {

TEST(Hashing, UniformIsDeterministicAndInUnitInterval) {
  for (std::uint64_t c = 0; c < 1000; ++c) {
    const double r = uniform01({7, c, "node"});
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, 1.0);
    EXPECT_EQ(r, uniform01({7, c, "node"}));
    EXPECT_EQ(r, uniform01(7, c, token_digest("node")));
  }
  EXPECT_EQ(unit_interval(~std::uint64_t{0}), 1.0);
  EXPECT_GT(unit_interval(0), 0.0);
}

TEST(Hashing, KeysSeparateSeedCoordinateAndToken) {
  const double base = uniform01({1, 2, "t"});
  EXPECT_NE(base, uniform01({2, 2, "t"}));
  EXPECT_NE(base, uniform01({1, 3, "t"}));
  EXPECT_NE(base, uniform01({1, 2, "u"}));
  EXPECT_NE(keyed_hash(1, 2, Stream::rank, 0, 5), keyed_hash(1, 2, Stream::walk, 0, 5));
  EXPECT_NE(keyed_hash(1, 2, Stream::rank, 0, 5), keyed_hash(1, 2, Stream::rank, 1, 5));
}

TEST(Hashing, UniformMomentsAndBins) {
  const int n = 200000;
  std::vector<int> bins(20, 0);
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = uniform01(3, static_cast<std::uint64_t>(i), token_digest("x"));
    sum += r;
    sq += r * r;
    ++bins[std::min(19, static_cast<int>(r * 20))];
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12, 0.003);
  double chi2 = 0.0;
  const double expected = n / 20.0;
  for (int b : bins) chi2 += (b - expected) * (b - expected) / expected;
  EXPECT_LT(chi2, 43.8);  // chi^2_19 at p = 0.001
}

TEST(Hashing, DigestDistinguishesNearbyStrings) {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 10000; ++i) seen.insert(token_digest("node" + std::to_string(i)));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(token_digest(""), token_digest(std::string(1, '\0')));
}

TEST(Tabulation, SeededAndReproducible) {
  const TabulationHasher a(5);
  const TabulationHasher b(5);
  const TabulationHasher c(6);
  int differ = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    EXPECT_EQ(a(k), b(k));
    differ += a(k) != c(k);
  }
  EXPECT_EQ(differ, 100);
  EXPECT_EQ(a.seed(), 5u);
}

TEST(Tabulation, BucketsAreInRangeAndBalanced) {
  const TabulationHasher h(42);
  const std::uint64_t buckets = 37;
  std::vector<int> counts(buckets, 0);
  const int n = 370000;
  for (int i = 0; i < n; ++i) {
    const auto b = bucket_hash(h, static_cast<std::uint64_t>(i) * 1000003, buckets);
    ASSERT_LT(b, buckets);
    ++counts[b];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  EXPECT_LT(chi2, 67.0);  // chi^2_36 at p = 0.002
  EXPECT_THROW(bucket_hash(h, 1, 0), std::invalid_argument);
}

TEST(Tabulation, PairwiseCollisionRateMatchesOneOverD) {
  // Distinct keys collide in a D-bucket table with probability ~1/D.
  const std::uint64_t d = 50;
  int collisions = 0;
  const int trials = 20000;
  for (int s = 0; s < trials; ++s) {
    const TabulationHasher h(static_cast<std::uint64_t>(s));
    collisions += bucket_hash(h, 12345, d) == bucket_hash(h, 67890, d);
  }
  const double rate = static_cast<double>(collisions) / trials;
  EXPECT_NEAR(rate, 1.0 / d, 4 * std::sqrt((1.0 / d) / trials));
}

}  // namespace
}  // namespace lone
