#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "lone/graph.hpp"
#include "lone/sampler.hpp"

namespace lone {

struct OverlapReport {
  double mean = 0.0;
  double median = 0.0;
  std::vector<Edge> pairs;
  std::vector<std::size_t> overlaps;
};

/// Hamming overlap of embedding rows a and b (empty cells never match).
std::size_t row_overlap(const EmbeddingMatrix& emb, std::size_t a, std::size_t b);

/// Overlap statistics over `pairs` node pairs drawn uniformly without
/// replacement. Throws std::invalid_argument if pairs is 0 or exceeds
/// n(n-1)/2.
OverlapReport average_overlap(const EmbeddingMatrix& emb, std::size_t pairs, std::uint64_t seed,
                              unsigned workers = 1);

struct LinkPredTask {
  /// Same node ids and tokens as the input graph, held-out edges removed.
  Graph residual;
  std::vector<Edge> held_out;
  /// Held-out edges plus sampled non-edges of the residual graph, sorted.
  std::vector<Edge> candidates;
  std::size_t k = 0;

  /// Hit rate of a uniformly random ranking: |held_out| / |candidates|.
  double random_baseline() const;
};

/// Holds out max(1, floor(holdout_frac * m)) edges while keeping the graph
/// connected, then samples floor(pair_frac * n(n-1)/2) node pairs. Throws
/// lone::Error if the graph is disconnected or the target cannot be reached.
LinkPredTask make_linkpred_task(const Graph& g, double holdout_frac, double pair_frac, std::size_t k,
                                std::uint64_t seed);

struct LinkPredMetrics {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t hits = 0;
};

using PairScorer = std::function<std::size_t(NodeId, NodeId)>;

/// Ranks candidates by score descending, ties by (u, v) ascending, and
/// scores the top k against the held-out set.
LinkPredMetrics precision_recall_at_k(const LinkPredTask& task, const PairScorer& score);
/// Scores by embedding row overlap. `emb` rows must follow the residual
/// graph's node order.
LinkPredMetrics precision_recall_at_k(const LinkPredTask& task, const EmbeddingMatrix& emb);

}  // namespace lone
