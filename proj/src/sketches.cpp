#include "lone/sketches.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lone/hashing.hpp"

namespace lone {

namespace detail {

void combine_duplicates(std::vector<CounterEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const CounterEntry& a, const CounterEntry& b) {
    return a.token < b.token || (a.token == b.token && a.weight < b.weight);
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries.size();) {
    const TokenId token = entries[i].token;
    double sum = 0.0;
    for (; i < entries.size() && entries[i].token == token; ++i) sum += entries[i].weight;
    entries[out++] = {token, sum};
  }
  entries.resize(out);
}

void prune_ranked(std::vector<CounterEntry>& entries, std::size_t capacity, std::span<const double> scale) {
  auto key = [&](const CounterEntry& e) { return scale.empty() ? e.weight : e.weight * scale[e.token]; };
  auto heavier = [&](const CounterEntry& a, const CounterEntry& b) {
    const double ka = key(a);
    const double kb = key(b);
    return ka > kb || (ka == kb && a.token < b.token);
  };
  if (entries.size() > capacity) {
    std::nth_element(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(capacity), entries.end(),
                     heavier);
    entries.resize(capacity);
  }
  std::sort(entries.begin(), entries.end(), heavier);
}

}  // namespace detail

TopLCounterSketch::TopLCounterSketch(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("sketch capacity must be at least 1");
}

TopLCounterSketch TopLCounterSketch::from_entries(std::size_t capacity, std::vector<CounterEntry> entries) {
  TopLCounterSketch sketch(capacity);
  for (const auto& e : entries) {
    if (!(e.weight > 0.0)) throw std::invalid_argument("counter weights must be positive");
  }
  detail::combine_duplicates(entries);
  detail::prune_ranked(entries, capacity, {});
  sketch.entries_ = std::move(entries);
  return sketch;
}

double TopLCounterSketch::weight_of(TokenId token) const noexcept {
  for (const auto& e : entries_) {
    if (e.token == token) return e.weight;
  }
  return 0.0;
}

double TopLCounterSketch::total_weight() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.weight;
  return s;
}

std::optional<CounterEntry> TopLCounterSketch::heaviest() const noexcept {
  if (entries_.empty()) return std::nullopt;
  return entries_.front();
}

TopLCounterSketch counter_merge_prune(std::span<const TopLCounterSketch> sketches, std::size_t capacity) {
  std::vector<CounterEntry> all;
  for (const auto& s : sketches) all.insert(all.end(), s.entries().begin(), s.entries().end());
  return TopLCounterSketch::from_entries(capacity, std::move(all));
}

CountSketchHasher::CountSketchHasher(std::size_t depth, std::size_t width, std::uint64_t seed,
                                     std::uint64_t coordinate)
    : depth_(depth), width_(width), seed_(seed), coordinate_(coordinate) {
  if (depth == 0 || width == 0) throw std::invalid_argument("CountSketch needs positive depth and width");
}

std::pair<std::size_t, double> CountSketchHasher::slot(std::size_t row, std::uint64_t digest) const noexcept {
  const auto bucket_bits = keyed_hash(seed_, coordinate_, Stream::sketch_bucket, row, digest);
  const auto sign_bits = keyed_hash(seed_, coordinate_, Stream::sketch_sign, row, digest);
  const auto bucket =
      static_cast<std::size_t>((static_cast<unsigned __int128>(bucket_bits) * width_) >> 64);
  return {row * width_ + bucket, (sign_bits >> 63) ? -1.0 : 1.0};
}

NormCountSketch::NormCountSketch(std::size_t depth, std::size_t width, std::uint64_t seed, std::uint64_t coordinate)
    : NormCountSketch(CountSketchHasher(depth, width, seed, coordinate)) {}

NormCountSketch::NormCountSketch(const CountSketchHasher& hasher)
    : hasher_(hasher), counters_(hasher.depth() * hasher.width(), 0.0) {}

std::size_t NormCountSketch::width_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  return static_cast<std::size_t>(std::ceil(kWidthConstant / (epsilon * epsilon) - 1e-9));
}

NormCountSketch NormCountSketch::for_epsilon(double epsilon, std::uint64_t seed, std::uint64_t coordinate) {
  return NormCountSketch(kDefaultDepth, width_for_epsilon(epsilon), seed, coordinate);
}

void NormCountSketch::update(std::uint64_t token_digest, double weight) {
  for (std::size_t row = 0; row < hasher_.depth(); ++row) {
    const auto [index, sign] = hasher_.slot(row, token_digest);
    counters_[index] += sign * weight;
  }
}

void NormCountSketch::merge(const NormCountSketch& other) {
  if (!(hasher_ == other.hasher_)) throw std::invalid_argument("cannot merge CountSketches with different hashes");
  for (std::size_t i = 0; i < counters_.size(); ++i) counters_[i] += other.counters_[i];
}

double NormCountSketch::estimate_l2() const {
  return estimate_l2_from_counters(counters_, hasher_.depth(), hasher_.width());
}

double estimate_l2_from_counters(std::span<const double> counters, std::size_t depth, std::size_t width) {
  std::vector<double> rows(depth);
  for (std::size_t r = 0; r < depth; ++r) {
    double s = 0.0;
    for (const double c : counters.subspan(r * width, width)) s += c * c;
    rows[r] = std::sqrt(s);
  }
  std::sort(rows.begin(), rows.end());
  if (depth % 2 == 1) return rows[depth / 2];
  return 0.5 * (rows[depth / 2 - 1] + rows[depth / 2]);
}

}  // namespace lone
