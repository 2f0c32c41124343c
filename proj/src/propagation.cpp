#include "lone/detail/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "lone/hashing.hpp"

namespace lone::detail {

std::vector<double> token_ranks(const TokenUniverse& universe, std::uint64_t seed, std::uint64_t coordinate) {
  std::vector<double> ranks(universe.size());
  for (TokenId t = 0; t < universe.size(); ++t) ranks[t] = uniform01(seed, coordinate, universe.digest(t));
  return ranks;
}

std::vector<double> reweighting_scale(std::span<const double> ranks, int p) {
  std::vector<double> scale(ranks.size());
  for (std::size_t t = 0; t < ranks.size(); ++t) {
    scale[t] = p == 1 ? 1.0 / ranks[t] : 1.0 / std::sqrt(ranks[t]);
  }
  return scale;
}

std::vector<MinPairSketch> initial_min_pairs(const SamplingProblem& problem, std::span<const double> ranks) {
  std::vector<MinPairSketch> state(problem.node_count());
  for (NodeId u = 0; u < problem.node_count(); ++u) {
    for (const TokenId t : problem.initial_tokens(u)) state[u] = minpair_merge(state[u], {ranks[t], t});
  }
  return state;
}

CounterState initial_counters(const SamplingProblem& problem, std::size_t capacity, std::span<const double> scale) {
  CounterState state(problem.node_count());
  for (NodeId u = 0; u < problem.node_count(); ++u) {
    auto& entries = state[u];
    for (const TokenId t : problem.initial_tokens(u)) entries.push_back({t, 1.0});
    prune_ranked(entries, capacity, scale);
  }
  return state;
}

std::vector<double> initial_masses(const SamplingProblem& problem) {
  std::vector<double> masses(problem.node_count());
  for (NodeId u = 0; u < problem.node_count(); ++u) {
    masses[u] = static_cast<double>(problem.initial_tokens(u).size());
  }
  return masses;
}

std::vector<double> initial_count_sketches(const SamplingProblem& problem, const CountSketchHasher& hasher) {
  const std::size_t block = hasher.depth() * hasher.width();
  std::vector<double> counters(problem.node_count() * block, 0.0);
  for (NodeId u = 0; u < problem.node_count(); ++u) {
    double* base = counters.data() + u * block;
    for (const TokenId t : problem.initial_tokens(u)) {
      for (std::size_t row = 0; row < hasher.depth(); ++row) {
        const auto [index, sign] = hasher.slot(row, problem.universe().digest(t));
        base[index] += sign;
      }
    }
  }
  return counters;
}

std::vector<MinPairSketch> propagate_min(const Graph& g, std::vector<MinPairSketch> state, int rounds) {
  std::vector<MinPairSketch> next(state.size());
  for (int i = 0; i < rounds; ++i) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      MinPairSketch best = state[u];
      for (const NodeId v : g.neighbors(u)) best = minpair_merge(best, state[v]);
      next[u] = best;
    }
    state.swap(next);
  }
  return state;
}

CounterState propagate_counters(const Graph& g, CounterState state, std::size_t capacity,
                                std::span<const double> scale, int rounds) {
  CounterState next(state.size());
  std::vector<CounterEntry> buffer;
  for (int i = 0; i < rounds; ++i) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      buffer.assign(state[u].begin(), state[u].end());
      for (const NodeId v : g.neighbors(u)) buffer.insert(buffer.end(), state[v].begin(), state[v].end());
      combine_duplicates(buffer);
      prune_ranked(buffer, capacity, scale);
      next[u].assign(buffer.begin(), buffer.end());
    }
    state.swap(next);
  }
  return state;
}

std::vector<double> propagate_scalar(const Graph& g, std::vector<double> state, int rounds) {
  std::vector<double> next(state.size());
  for (int i = 0; i < rounds; ++i) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      double s = state[u];
      for (const NodeId v : g.neighbors(u)) s += state[v];
      next[u] = s;
    }
    state.swap(next);
  }
  return state;
}

std::vector<double> propagate_blocks(const Graph& g, std::vector<double> state, std::size_t block, int rounds) {
  std::vector<double> next(state.size());
  for (int i = 0; i < rounds; ++i) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      double* out = next.data() + u * block;
      const double* own = state.data() + u * block;
      std::copy(own, own + block, out);
      for (const NodeId v : g.neighbors(u)) {
        const double* in = state.data() + v * block;
        for (std::size_t j = 0; j < block; ++j) out[j] += in[j];
      }
    }
    state.swap(next);
  }
  return state;
}

Selection select_heavy_hitter(std::span<const CounterEntry> sorted, std::span<const double> scale,
                              double threshold, FallbackPolicy fallback) {
  if (sorted.empty()) return {};
  const auto& top = sorted.front();
  if (top.weight * scale[top.token] >= threshold) return {top.token, CellStatus::sampled};
  if (fallback == FallbackPolicy::heaviest) return {top.token, CellStatus::fallback};
  return {};
}

std::uint64_t walk_key(std::uint64_t seed, std::uint64_t coordinate, std::uint64_t start_digest, int step,
                       std::uint64_t neighbor_digest) {
  return keyed_hash(seed, coordinate, Stream::walk, static_cast<std::uint64_t>(step),
                    mix64(start_digest + 0x8BB84B93962EACC9ULL) ^ neighbor_digest);
}

TokenId walk_token(const SamplingProblem& problem, std::uint64_t seed, std::uint64_t coordinate,
                   std::uint64_t start_digest, NodeId node) {
  const auto tokens = problem.initial_tokens(node);
  if (tokens.size() == 1) return tokens.front();
  TokenId best = kNoToken;
  std::uint64_t best_key = 0;
  for (const TokenId t : tokens) {
    const auto key = keyed_hash(seed, coordinate, Stream::walk_attribute, 0,
                                mix64(start_digest + 0x8BB84B93962EACC9ULL) ^ problem.universe().digest(t));
    if (best == kNoToken || key < best_key || (key == best_key && t < best)) {
      best = t;
      best_key = key;
    }
  }
  return best;
}

}  // namespace lone::detail
