#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lone {

/// Ordinal of a token in a sorted token universe; ordinal order equals
/// lexicographic order of the external tokens.
using TokenId = std::uint32_t;
inline constexpr TokenId kNoToken = std::numeric_limits<TokenId>::max();

/// L0 summary: the (rank, token) pair with the smallest rank seen so far.
/// Ranks tie-break on the token ordinal.
struct MinPairSketch {
  double rank = std::numeric_limits<double>::infinity();
  TokenId token = kNoToken;

  bool empty() const noexcept { return token == kNoToken; }
  friend bool operator==(const MinPairSketch&, const MinPairSketch&) = default;
};

inline bool precedes(const MinPairSketch& a, const MinPairSketch& b) noexcept {
  return a.rank < b.rank || (a.rank == b.rank && a.token < b.token);
}

inline MinPairSketch minpair_merge(const MinPairSketch& a, const MinPairSketch& b) noexcept {
  return precedes(b, a) ? b : a;
}

struct CounterEntry {
  TokenId token = kNoToken;
  double weight = 0.0;
  friend bool operator==(const CounterEntry&, const CounterEntry&) = default;
};

/// Capacity-bounded counter summary keeping the heaviest tokens.
///
/// Entries are ordered by (weight * scale(token)) descending, then token
/// ascending. With no scale the ranking weight is the stored weight. Merging
/// is canonical: all inputs are summed exactly per token, then the summary is
/// pruned to `capacity` entries. A dropped token's weight is at most
/// total / (capacity + 1), the Misra-Gries guarantee.
class TopLCounterSketch {
 public:
  explicit TopLCounterSketch(std::size_t capacity);

  /// Sums duplicate tokens and prunes. Weights must be positive.
  static TopLCounterSketch from_entries(std::size_t capacity, std::vector<CounterEntry> entries);

  std::size_t capacity() const noexcept { return capacity_; }
  std::span<const CounterEntry> entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Weight held for `token`, 0 if absent.
  double weight_of(TokenId token) const noexcept;
  double total_weight() const noexcept;
  std::optional<CounterEntry> heaviest() const noexcept;

  friend bool operator==(const TopLCounterSketch&, const TopLCounterSketch&) = default;

 private:
  std::size_t capacity_;
  std::vector<CounterEntry> entries_;
};

/// Canonical merge: sums weights per token across all inputs and keeps the
/// top `capacity` by (weight desc, token asc). The result does not depend on
/// the order of `sketches`. Throws on capacity == 0.
TopLCounterSketch counter_merge_prune(std::span<const TopLCounterSketch> sketches, std::size_t capacity);

namespace detail {

/// Sums duplicate tokens of `entries` in place. Contributions of one token
/// are added in ascending value order so the result is permutation-invariant.
void combine_duplicates(std::vector<CounterEntry>& entries);

/// Keeps the `capacity` entries with the largest weight * scale[token]
/// (ties: smaller token), sorted in that order. Empty `scale` means 1.
void prune_ranked(std::vector<CounterEntry>& entries, std::size_t capacity, std::span<const double> scale);

}  // namespace detail

/// Row/bucket/sign layout of a CountSketch, fixed by its seed.
class CountSketchHasher {
 public:
  CountSketchHasher(std::size_t depth, std::size_t width, std::uint64_t seed, std::uint64_t coordinate = 0);

  std::size_t depth() const noexcept { return depth_; }
  std::size_t width() const noexcept { return width_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t coordinate() const noexcept { return coordinate_; }

  /// Counter index in [0, depth * width) and the +-1 sign for `digest` in `row`.
  std::pair<std::size_t, double> slot(std::size_t row, std::uint64_t digest) const noexcept;

  friend bool operator==(const CountSketchHasher&, const CountSketchHasher&) = default;

 private:
  std::size_t depth_;
  std::size_t width_;
  std::uint64_t seed_;
  std::uint64_t coordinate_;
};

/// Linear CountSketch used to estimate the L2 norm of a non-negative vector.
class NormCountSketch {
 public:
  static constexpr std::size_t kDefaultDepth = 5;
  static constexpr double kWidthConstant = 6.0;

  NormCountSketch(std::size_t depth, std::size_t width, std::uint64_t seed, std::uint64_t coordinate = 0);
  explicit NormCountSketch(const CountSketchHasher& hasher);

  /// depth 5, width ceil(6 / eps^2).
  static NormCountSketch for_epsilon(double epsilon, std::uint64_t seed, std::uint64_t coordinate = 0);
  static std::size_t width_for_epsilon(double epsilon);

  /// counters[r][h_r(token)] += sign_r(token) * weight for every row.
  void update(std::uint64_t token_digest, double weight);
  /// Counterwise addition; the hashers must match.
  void merge(const NormCountSketch& other);

  /// Median over rows of the row's Euclidean counter norm.
  double estimate_l2() const;

  const CountSketchHasher& hasher() const noexcept { return hasher_; }
  std::span<const double> counters() const noexcept { return counters_; }

  friend bool operator==(const NormCountSketch&, const NormCountSketch&) = default;

 private:
  CountSketchHasher hasher_;
  std::vector<double> counters_;
};

/// Median of per-row Euclidean norms of a depth x width counter block.
double estimate_l2_from_counters(std::span<const double> counters, std::size_t depth, std::size_t width);

}  // namespace lone
