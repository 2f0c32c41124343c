#include "lone/featuremap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace lone {

DiscreteVector row_vector(const EmbeddingMatrix& emb, std::size_t r) {
  const auto row = emb.row(r);
  return {std::vector<TokenId>(row.begin(), row.end()), emb.universe().size()};
}

std::size_t hamming_kernel(const DiscreteVector& x, const DiscreteVector& y) {
  if (x.dimension() != y.dimension()) {
    throw std::invalid_argument("hamming_kernel: dimension mismatch (" + std::to_string(x.dimension()) + " vs " +
                                std::to_string(y.dimension()) + ")");
  }
  std::size_t h = 0;
  for (std::size_t i = 0; i < x.tokens.size(); ++i) {
    if (x.tokens[i] != kNoToken && x.tokens[i] == y.tokens[i]) ++h;
  }
  return h;
}

std::uint64_t map_dimension(std::size_t d, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  const double raw = std::ceil(static_cast<double>(d) / eps - 1e-9);
  if (!(raw < 0x1p63)) throw std::invalid_argument("map dimension d/epsilon overflows");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
}

SparseBinaryMap explicit_map(const DiscreteVector& x, double eps, const TabulationHasher& hasher) {
  SparseBinaryMap out;
  out.dimension = map_dimension(x.dimension(), eps);
  const std::uint64_t n = x.universe_size;
  if (n != 0 && x.dimension() > std::numeric_limits<std::uint64_t>::max() / n) {
    throw std::invalid_argument("explicit_map: index space d*N overflows");
  }
  out.indices.reserve(x.dimension());
  for (std::size_t i = 0; i < x.tokens.size(); ++i) {
    const TokenId t = x.tokens[i];
    if (t == kNoToken) continue;
    out.indices.push_back(bucket_hash(hasher, i * n + t, out.dimension));
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  return out;
}

std::size_t map_inner_product(const SparseBinaryMap& a, const SparseBinaryMap& b) {
  if (a.dimension != b.dimension) {
    throw std::invalid_argument("map_inner_product: dimension mismatch (" + std::to_string(a.dimension) + " vs " +
                                std::to_string(b.dimension) + ")");
  }
  std::size_t dot = 0;
  auto i = a.indices.begin();
  auto j = b.indices.begin();
  while (i != a.indices.end() && j != b.indices.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++dot;
      ++i;
      ++j;
    }
  }
  return dot;
}

std::vector<SparseBinaryMap> map_embedding(const EmbeddingMatrix& emb, double eps, const TabulationHasher& hasher,
                                           unsigned workers) {
  map_dimension(emb.cols(), eps);
  std::vector<SparseBinaryMap> maps(emb.rows());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < maps.size(); r = next++) maps[r] = explicit_map(row_vector(emb, r), eps, hasher);
  };
  workers = std::max(1u, workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  return maps;
}

void export_sparse(std::ostream& out, std::span<const SparseBinaryMap> maps,
                   std::optional<std::span<const int>> labels) {
  if (labels && labels->size() != maps.size()) throw std::invalid_argument("export_sparse: one label per map required");
  for (std::size_t r = 0; r < maps.size(); ++r) {
    out << (labels ? (*labels)[r] : 0);
    for (const auto idx : maps[r].indices) out << ' ' << idx << ":1";
    out << '\n';
  }
}

}  // namespace lone
