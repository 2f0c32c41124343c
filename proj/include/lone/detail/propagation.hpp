#pragma once

// Kernels shared by the in-memory sampler and the streaming driver. Both
// paths must produce bit-identical results, so every accumulation here is
// either a min or a sum of integer-valued doubles.

#include <cstdint>
#include <span>
#include <vector>

#include "lone/graph.hpp"
#include "lone/sampler.hpp"
#include "lone/sketches.hpp"

namespace lone::detail {

inline constexpr double kExactCountLimit = 9007199254740992.0;  // 2^53

using CounterState = std::vector<std::vector<CounterEntry>>;

/// r(t) for every token of the universe.
std::vector<double> token_ranks(const TokenUniverse& universe, std::uint64_t seed, std::uint64_t coordinate);
/// 1 / r^(1/p) for p = 1 or 2.
std::vector<double> reweighting_scale(std::span<const double> ranks, int p);

std::vector<MinPairSketch> initial_min_pairs(const SamplingProblem& problem, std::span<const double> ranks);
CounterState initial_counters(const SamplingProblem& problem, std::size_t capacity, std::span<const double> scale);
std::vector<double> initial_masses(const SamplingProblem& problem);
/// Node-major depth x width counter blocks of the unweighted start vectors.
std::vector<double> initial_count_sketches(const SamplingProblem& problem, const CountSketchHasher& hasher);

std::vector<MinPairSketch> propagate_min(const Graph& g, std::vector<MinPairSketch> state, int rounds);
CounterState propagate_counters(const Graph& g, CounterState state, std::size_t capacity,
                                std::span<const double> scale, int rounds);
std::vector<double> propagate_scalar(const Graph& g, std::vector<double> state, int rounds);
std::vector<double> propagate_blocks(const Graph& g, std::vector<double> state, std::size_t block, int rounds);

struct Selection {
  TokenId token = kNoToken;
  CellStatus status = CellStatus::empty;
};

/// Heavy-hitter rule: the heaviest entry (entries are sorted) is sampled if
/// its reweighted weight reaches `threshold`; otherwise apply `fallback`.
Selection select_heavy_hitter(std::span<const CounterEntry> sorted, std::span<const double> scale,
                              double threshold, FallbackPolicy fallback);

/// Walk step: the neighbour with the smallest keyed hash.
std::uint64_t walk_key(std::uint64_t seed, std::uint64_t coordinate, std::uint64_t start_digest, int step,
                       std::uint64_t neighbor_digest);
/// Token reported by a walk ending at `node`.
TokenId walk_token(const SamplingProblem& problem, std::uint64_t seed, std::uint64_t coordinate,
                   std::uint64_t start_digest, NodeId node);

}  // namespace lone::detail
