#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace lone {

/// Bijective 64-bit finalizer (splitmix64 / murmur3 style avalanche).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Stable, platform-independent 64-bit digest of a byte string.
std::uint64_t token_digest(std::string_view bytes) noexcept;

/// Independent random streams derived from one (seed, coordinate).
enum class Stream : std::uint64_t {
  rank = 0,
  sketch_bucket = 1,
  sketch_sign = 2,
  walk = 3,
  walk_attribute = 4,
};

/// Deterministic keyed hash of (seed, coordinate, stream, row, digest).
/// `row` separates CountSketch rows and walk steps.
std::uint64_t keyed_hash(std::uint64_t seed, std::uint64_t coordinate, Stream stream, std::uint64_t row,
                         std::uint64_t digest) noexcept;

/// Maps a 64-bit hash h to (h+1)/2^64, a value in (0, 1].
double unit_interval(std::uint64_t h) noexcept;

struct RandomKey {
  std::uint64_t global_seed = 0;
  std::uint64_t coordinate_index = 0;
  std::string_view token;
};

/// The random function r(token) for one coordinate: uniform on (0, 1],
/// never 0, and a pure function of the key.
double uniform01(const RandomKey& key) noexcept;
/// Same draw from a precomputed token digest.
double uniform01(std::uint64_t seed, std::uint64_t coordinate, std::uint64_t digest) noexcept;

/// Simple tabulation hashing over the 8 bytes of a 64-bit key.
class TabulationHasher {
 public:
  explicit TabulationHasher(std::uint64_t seed);

  std::uint64_t operator()(std::uint64_t key) const noexcept {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      h ^= tables_[i][(key >> (8 * i)) & 0xFF];
    }
    return h;
  }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::array<std::uint64_t, 256>, 8> tables_{};
};

/// Maps `index` to a bucket in [0, buckets). Throws on buckets == 0.
std::uint64_t bucket_hash(const TabulationHasher& hasher, std::uint64_t index, std::uint64_t buckets);

}  // namespace lone
