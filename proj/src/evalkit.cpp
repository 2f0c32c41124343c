#include "lone/evalkit.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

#include "lone/error.hpp"

namespace lone {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

Edge ordered(NodeId u, NodeId v) { return u < v ? Edge{u, v} : Edge{v, u}; }

/// `count` distinct unordered pairs over n nodes, uniform without
/// replacement, in draw order.
std::vector<Edge> sample_pairs(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  const std::uint64_t total = n < 2 ? 0 : std::uint64_t{n} * (n - 1) / 2;
  std::vector<Edge> out;
  out.reserve(count);
  if (count * 2 >= total) {
    std::vector<Edge> all;
    all.reserve(total);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) all.emplace_back(u, v);
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    all.resize(count);
    return all;
  }
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < count) {
    const NodeId u = node(rng);
    const NodeId v = node(rng);
    if (u == v || !seen.insert(pair_key(u, v)).second) continue;
    out.push_back(ordered(u, v));
  }
  return out;
}

}  // namespace

std::size_t row_overlap(const EmbeddingMatrix& emb, std::size_t a, std::size_t b) {
  const auto x = emb.row(a);
  const auto y = emb.row(b);
  std::size_t h = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != kNoToken && x[i] == y[i]) ++h;
  }
  return h;
}

OverlapReport average_overlap(const EmbeddingMatrix& emb, std::size_t pairs, std::uint64_t seed, unsigned workers) {
  const std::size_t n = emb.rows();
  const std::uint64_t total = n < 2 ? 0 : std::uint64_t{n} * (n - 1) / 2;
  if (pairs == 0) throw std::invalid_argument("average_overlap: need at least one pair");
  if (pairs > total) {
    throw std::invalid_argument("average_overlap: " + std::to_string(pairs) + " pairs requested but only " +
                                std::to_string(total) + " exist");
  }
  std::mt19937_64 rng(seed);
  OverlapReport report;
  report.pairs = sample_pairs(n, pairs, rng);
  report.overlaps.resize(pairs);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pairs; i = next++) {
      report.overlaps[i] = row_overlap(emb, report.pairs[i].first, report.pairs[i].second);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < std::max(1u, workers); ++w) pool.emplace_back(work);
    work();
  }

  report.mean = static_cast<double>(std::accumulate(report.overlaps.begin(), report.overlaps.end(), std::size_t{0})) /
                static_cast<double>(pairs);
  auto sorted = report.overlaps;
  std::sort(sorted.begin(), sorted.end());
  report.median = pairs % 2 == 1 ? static_cast<double>(sorted[pairs / 2])
                                 : 0.5 * static_cast<double>(sorted[pairs / 2 - 1] + sorted[pairs / 2]);
  return report;
}

double LinkPredTask::random_baseline() const {
  return candidates.empty() ? 0.0 : static_cast<double>(held_out.size()) / static_cast<double>(candidates.size());
}

LinkPredTask make_linkpred_task(const Graph& g, double holdout_frac, double pair_frac, std::size_t k,
                                std::uint64_t seed) {
  if (!(holdout_frac > 0.0 && holdout_frac < 1.0)) throw std::invalid_argument("holdout fraction must lie in (0, 1)");
  if (!(pair_frac > 0.0 && pair_frac <= 1.0)) throw std::invalid_argument("pair fraction must lie in (0, 1]");
  if (g.directed()) throw Error("link prediction needs an undirected graph");
  if (!is_connected(g)) throw Error("link prediction needs a connected graph");

  const std::size_t n = g.node_count();
  auto edges = g.edges();
  const std::size_t m = edges.size();
  const std::size_t target =
      std::max<std::size_t>(1, static_cast<std::size_t>(holdout_frac * static_cast<double>(m)));

  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);

  // Spanning tree over the shuffled order; everything else may go.
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto root = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> in_tree(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const NodeId a = root(edges[i].first);
    const NodeId b = root(edges[i].second);
    if (a != b) {
      parent[a] = b;
      in_tree[i] = 1;
    }
  }
  const std::size_t removable = m - static_cast<std::size_t>(std::count(in_tree.begin(), in_tree.end(), 1));
  if (removable < target) {
    throw Error("cannot hold out " + std::to_string(target) + " of " + std::to_string(m) +
                " edges without disconnecting the graph; achievable fraction " +
                std::to_string(static_cast<double>(removable) / static_cast<double>(m)));
  }

  LinkPredTask task;
  task.k = k;
  std::vector<Edge> kept;
  kept.reserve(m - target);
  for (std::size_t i = 0; i < m; ++i) {
    if (!in_tree[i] && task.held_out.size() < target) {
      task.held_out.push_back(edges[i]);
    } else {
      kept.push_back(edges[i]);
    }
  }
  std::sort(task.held_out.begin(), task.held_out.end());
  std::sort(kept.begin(), kept.end());
  task.residual = Graph::from_edges(std::vector<std::string>(g.tokens().begin(), g.tokens().end()), kept, false);

  std::unordered_set<std::uint64_t> residual_edges;
  for (const auto& [u, v] : kept) residual_edges.insert(pair_key(u, v));
  std::unordered_set<std::uint64_t> held;
  for (const auto& [u, v] : task.held_out) held.insert(pair_key(u, v));

  const std::uint64_t total = std::uint64_t{n} * (n - 1) / 2;
  const auto sampled_count = static_cast<std::size_t>(pair_frac * static_cast<double>(total));
  task.candidates = task.held_out;
  for (const auto& [u, v] : sample_pairs(n, sampled_count, rng)) {
    const auto key = pair_key(u, v);
    if (!residual_edges.contains(key) && !held.contains(key)) task.candidates.emplace_back(u, v);
  }
  std::sort(task.candidates.begin(), task.candidates.end());
  if (k == 0 || k > task.candidates.size()) {
    throw std::invalid_argument("ranking cutoff K=" + std::to_string(k) + " must lie in [1, " +
                                std::to_string(task.candidates.size()) + "]");
  }
  return task;
}

LinkPredMetrics precision_recall_at_k(const LinkPredTask& task, const PairScorer& score) {
  struct Scored {
    std::size_t score;
    Edge pair;
  };
  std::vector<Scored> ranked;
  ranked.reserve(task.candidates.size());
  for (const auto& [u, v] : task.candidates) ranked.push_back({score(u, v), {u, v}});
  const std::size_t k = std::min(task.k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end(),
                    [](const Scored& a, const Scored& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.pair < b.pair;
                    });
  LinkPredMetrics metrics;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::binary_search(task.held_out.begin(), task.held_out.end(), ranked[i].pair)) ++metrics.hits;
  }
  metrics.precision = k == 0 ? 0.0 : static_cast<double>(metrics.hits) / static_cast<double>(k);
  metrics.recall =
      task.held_out.empty() ? 0.0 : static_cast<double>(metrics.hits) / static_cast<double>(task.held_out.size());
  return metrics;
}

LinkPredMetrics precision_recall_at_k(const LinkPredTask& task, const EmbeddingMatrix& emb) {
  const auto& g = task.residual;
  if (emb.rows() != g.node_count()) throw std::invalid_argument("embedding rows do not match the residual graph");
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (emb.row_token(u) != g.token(u)) {
      throw std::invalid_argument("embedding row " + std::to_string(u) + " is '" + emb.row_token(u) +
                                  "', expected '" + g.token(u) + "'");
    }
  }
  return precision_recall_at_k(task, [&](NodeId u, NodeId v) { return row_overlap(emb, u, v); });
}

}  // namespace lone
