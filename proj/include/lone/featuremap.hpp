#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lone/hashing.hpp"
#include "lone/sampler.hpp"

namespace lone {

/// d positional tokens over a universe of size N. kNoToken is the null
/// token and matches nothing.
struct DiscreteVector {
  std::vector<TokenId> tokens;
  std::size_t universe_size = 0;

  std::size_t dimension() const noexcept { return tokens.size(); }
};

/// Row `r` of an embedding; empty cells become the null token.
DiscreteVector row_vector(const EmbeddingMatrix& emb, std::size_t r);

/// Binary vector in {0,1}^D stored as strictly increasing active indices.
struct SparseBinaryMap {
  std::uint64_t dimension = 0;
  std::vector<std::uint64_t> indices;

  friend bool operator==(const SparseBinaryMap&, const SparseBinaryMap&) = default;
};

/// Number of positions holding the same non-null token.
std::size_t hamming_kernel(const DiscreteVector& x, const DiscreteVector& y);

/// ceil(d / eps); throws std::invalid_argument for eps outside (0, 1] or on
/// overflow.
std::uint64_t map_dimension(std::size_t d, double eps);

/// Hashes nonzero (i*N + t) of the one-hot Nd vector into map_dimension(d,
/// eps) buckets; collisions set a bucket once.
SparseBinaryMap explicit_map(const DiscreteVector& x, double eps, const TabulationHasher& hasher);

/// |a ∩ b|. Throws std::invalid_argument when dimensions differ.
std::size_t map_inner_product(const SparseBinaryMap& a, const SparseBinaryMap& b);

/// Maps every row of `emb`, in parallel over rows.
std::vector<SparseBinaryMap> map_embedding(const EmbeddingMatrix& emb, double eps, const TabulationHasher& hasher,
                                           unsigned workers = 1);

/// One line per map: `label idx:1 idx:1 ...`; label 0 when no labels given.
void export_sparse(std::ostream& out, std::span<const SparseBinaryMap> maps,
                   std::optional<std::span<const int>> labels = std::nullopt);

}  // namespace lone
