#include "lone/hashing.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>

namespace lone {

std::uint64_t token_digest(std::string_view bytes) noexcept {
  std::uint64_t h = mix64(0x6A09E667F3BCC909ULL ^ bytes.size());
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    std::uint64_t chunk = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      chunk |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i + b])) << (8 * b);
    }
    h = mix64(h ^ chunk) + 0x9E3779B97F4A7C15ULL;
  }
  std::uint64_t tail = 0;
  for (std::size_t b = 0; i + b < bytes.size(); ++b) {
    tail |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i + b])) << (8 * b);
  }
  return mix64(h ^ mix64(tail + 0xD1B54A32D192ED03ULL));
}

std::uint64_t keyed_hash(std::uint64_t seed, std::uint64_t coordinate, Stream stream, std::uint64_t row,
                         std::uint64_t digest) noexcept {
  std::uint64_t key = mix64(seed ^ 0x243F6A8885A308D3ULL);
  key = mix64(key ^ (coordinate + 0x13198A2E03707344ULL));
  key = mix64(key ^ (static_cast<std::uint64_t>(stream) * 0xA4093822299F31D0ULL + row));
  std::uint64_t h = mix64(key ^ digest);
  return mix64(h + (key >> 1) + 0x082EFA98EC4E6C89ULL);
}

double unit_interval(std::uint64_t h) noexcept {
  return std::ldexp(static_cast<double>(h) + 1.0, -64);
}

double uniform01(std::uint64_t seed, std::uint64_t coordinate, std::uint64_t digest) noexcept {
  return unit_interval(keyed_hash(seed, coordinate, Stream::rank, 0, digest));
}

double uniform01(const RandomKey& key) noexcept {
  return uniform01(key.global_seed, key.coordinate_index, token_digest(key.token));
}

TabulationHasher::TabulationHasher(std::uint64_t seed) : seed_(seed) {
  // mt19937_64 output is fixed by the standard, so tables match everywhere.
  std::mt19937_64 engine(seed);
  for (auto& table : tables_) {
    for (auto& entry : table) entry = engine();
  }
}

std::uint64_t bucket_hash(const TabulationHasher& hasher, std::uint64_t index, std::uint64_t buckets) {
  if (buckets == 0) throw std::invalid_argument("bucket count must be positive");
  const auto h = static_cast<unsigned __int128>(hasher(index));
  return static_cast<std::uint64_t>((h * buckets) >> 64);
}

}  // namespace lone
