#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "lone/featuremap.hpp"

namespace lone {
namespace {

DiscreteVector vec(std::vector<TokenId> tokens, std::size_t n = 26) { return {std::move(tokens), n}; }

DiscreteVector random_vector(std::mt19937_64& rng, std::size_t d, std::size_t n) {
  DiscreteVector x{std::vector<TokenId>(d), n};
  for (auto& t : x.tokens) t = static_cast<TokenId>(rng() % n);
  return x;
}

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming_kernel(vec({0, 1, 2}), vec({0, 1, 2})), 3u);
  EXPECT_EQ(hamming_kernel(vec({0, 1, 2}), vec({0, 23, 2})), 2u);
  EXPECT_EQ(hamming_kernel(vec({0, 1}), vec({1, 0})), 0u);
  EXPECT_EQ(hamming_kernel(vec({kNoToken, 1}), vec({kNoToken, 1})), 1u);
  EXPECT_THROW(hamming_kernel(vec({0}), vec({0, 1})), std::invalid_argument);
}

TEST(MapDimension, CeilOfDOverEpsilon) {
  EXPECT_EQ(map_dimension(50, 0.01), 5000u);
  EXPECT_EQ(map_dimension(50, 1.0), 50u);
  EXPECT_EQ(map_dimension(3, 0.5), 6u);
  EXPECT_EQ(map_dimension(10, 0.3), 34u);
  EXPECT_THROW(map_dimension(50, 0.0), std::invalid_argument);
  EXPECT_THROW(map_dimension(50, 1.5), std::invalid_argument);
  EXPECT_THROW(map_dimension(50, 1e-300), std::invalid_argument);
}

TEST(ExplicitMap, ShapeInvariants) {
  std::mt19937_64 rng(1);
  const TabulationHasher h(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_vector(rng, 50, 100);
    for (int i = 0; i < 5; ++i) x.tokens[rng() % 50] = kNoToken;
    const std::size_t nonnull = static_cast<std::size_t>(std::count_if(
        x.tokens.begin(), x.tokens.end(), [](TokenId t) { return t != kNoToken; }));
    const auto f = explicit_map(x, 0.1, h);
    EXPECT_EQ(f.dimension, 500u);
    EXPECT_LE(f.indices.size(), nonnull);
    EXPECT_TRUE(std::adjacent_find(f.indices.begin(), f.indices.end(),
                                   [](auto a, auto b) { return a >= b; }) == f.indices.end());
    for (const auto i : f.indices) EXPECT_LT(i, f.dimension);
    EXPECT_EQ(map_inner_product(f, f), f.indices.size());
  }
  EXPECT_TRUE(explicit_map(vec({kNoToken, kNoToken}), 0.5, h).indices.empty());
}

TEST(ExplicitMap, SingleCoordinateCollidesRarely) {
  std::mt19937_64 rng(2);
  const double eps = 0.05;
  int collisions = 0;
  const int trials = 20000;
  for (int s = 0; s < trials; ++s) {
    const TabulationHasher h(rng());
    EXPECT_EQ(map_inner_product(explicit_map(vec({4}), eps, h), explicit_map(vec({4}), eps, h)), 1u);
    collisions += static_cast<int>(map_inner_product(explicit_map(vec({4}), eps, h), explicit_map(vec({9}), eps, h)));
  }
  // Distinct tokens share a bucket with probability 1/D = eps.
  EXPECT_LE(static_cast<double>(collisions) / trials, eps + 4 * std::sqrt(eps / trials));
}

TEST(ExplicitMap, ErrorIsBoundedByCollidingPairs) {
  std::mt19937_64 rng(3);
  const std::size_t d = 20;
  const std::size_t n = 4;
  const double eps = 0.2;
  for (int trial = 0; trial < 2000; ++trial) {
    const TabulationHasher h(rng());
    const auto x = random_vector(rng, d, n);
    const auto y = random_vector(rng, d, n);
    const auto fx = explicit_map(x, eps, h);
    const auto fy = explicit_map(y, eps, h);
    const auto dot = map_inner_product(fx, fy);
    const auto exact = hamming_kernel(x, y);
    EXPECT_LE(dot, std::min(fx.indices.size(), fy.indices.size()));

    std::set<std::uint64_t> nonzeros;
    for (std::size_t i = 0; i < d; ++i) {
      nonzeros.insert(i * n + x.tokens[i]);
      nonzeros.insert(i * n + y.tokens[i]);
    }
    const std::vector<std::uint64_t> all(nonzeros.begin(), nonzeros.end());
    std::size_t colliding = 0;
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size(); ++b) {
        colliding += bucket_hash(h, all[a], fx.dimension) == bucket_hash(h, all[b], fx.dimension);
      }
    }
    const auto err = dot > exact ? dot - exact : exact - dot;
    ASSERT_LE(err, colliding) << "trial " << trial;
  }
}

TEST(ExplicitMap, ExpectedOwnCollisionsAtMostEpsD) {
  std::mt19937_64 rng(4);
  const std::size_t d = 50;
  const double eps = 0.01;
  const int trials = 4000;
  std::vector<double> counts;
  for (int t = 0; t < trials; ++t) {
    const TabulationHasher h(rng());
    const auto x = random_vector(rng, d, 1000);
    const auto f = explicit_map(x, eps, h);
    counts.push_back(static_cast<double>(d - f.indices.size()));
  }
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= trials;
  double var = 0.0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= trials - 1;
  const double sigma = std::sqrt(var / trials);
  // Pairwise collisions among d indices: C(d,2)/D = 0.245 <= eps * d.
  EXPECT_NEAR(mean, 1225.0 / 5000.0, 3 * sigma + 0.01);
  EXPECT_LE(mean, eps * d);
}

TEST(InnerProduct, DisjointAndMismatch) {
  SparseBinaryMap a{10, {1, 3}};
  SparseBinaryMap b{10, {2, 4}};
  SparseBinaryMap c{11, {1}};
  EXPECT_EQ(map_inner_product(a, b), 0u);
  EXPECT_EQ(map_inner_product(a, SparseBinaryMap{10, {3, 9}}), 1u);
  EXPECT_THROW(map_inner_product(a, c), std::invalid_argument);
}

TEST(ExportSparse, Format) {
  const std::vector<SparseBinaryMap> maps{{10, {2, 5}}, {10, {}}, {10, {0}}};
  const std::vector<int> labels{1, 2, 0};
  std::ostringstream with;
  export_sparse(with, maps, std::span<const int>(labels));
  EXPECT_EQ(with.str(), "1 2:1 5:1\n2\n0 0:1\n");
  std::ostringstream without;
  export_sparse(without, maps);
  EXPECT_EQ(without.str(), "0 2:1 5:1\n0\n0 0:1\n");
}

TEST(MapEmbedding, WorkerIndependent) {
  std::vector<std::string> rows;
  for (int i = 0; i < 40; ++i) rows.push_back("r" + std::to_string(i));
  auto universe = std::make_shared<const TokenUniverse>(std::vector<std::string>{"a", "b", "c", "d"});
  EmbeddingMatrix emb(rows, 8, universe, SamplerConfig{});
  std::mt19937_64 rng(5);
  for (std::size_t r = 0; r < 40; ++r) {
    for (std::size_t c = 0; c < 8; ++c) emb.set(r, c, static_cast<TokenId>(rng() % 4), CellStatus::sampled);
  }
  const TabulationHasher h(1);
  EXPECT_EQ(map_embedding(emb, 0.1, h, 1), map_embedding(emb, 0.1, h, 6));
}

}  // namespace
}  // namespace lone
