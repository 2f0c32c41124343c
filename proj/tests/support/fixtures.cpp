#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lone/hashing.hpp"
#include "lone/oracle.hpp"
#include "lone/sketches.hpp"

namespace lone::testing {

std::vector<std::string> numbered_tokens(std::size_t n) {
  std::vector<std::string> tokens;
  tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) tokens.push_back("n" + std::to_string(i));
  return tokens;
}

Graph graph_from(std::size_t n, const std::vector<Edge>& edges, bool directed) {
  return Graph::from_edges(numbered_tokens(n), edges, directed);
}

Graph path3() { return Graph::from_edges({"a", "b", "c"}, std::vector<Edge>{{0, 1}, {1, 2}}, false); }

Graph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, static_cast<NodeId>((i + 1) % n));
  return graph_from(n, edges);
}

Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  if (p > 0.0) {
    const double log_q = std::log1p(-p);
    long long v = 1;
    long long w = -1;
    const auto nn = static_cast<long long>(n);
    while (v < nn) {
      const double r = unit(rng);
      w += 1 + (p >= 1.0 ? 0 : static_cast<long long>(std::floor(std::log1p(-r) / log_q)));
      while (w >= v && v < nn) {
        w -= v;
        ++v;
      }
      if (v < nn) edges.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
  }
  return graph_from(n, edges);
}

Graph random_connected(std::size_t n, std::size_t extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    std::uniform_int_distribution<NodeId> parent(0, v - 1);
    edges.emplace_back(parent(rng), v);
  }
  if (n > 1) {
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    for (std::size_t i = 0; i < extra; ++i) edges.emplace_back(node(rng), node(rng));
  }
  // Shuffle ids so the tree structure is not aligned with id order.
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& [a, b] : edges) {
    a = perm[a];
    b = perm[b];
  }
  return graph_from(n, edges);
}

Graph connected_gnp(std::size_t n, double p, std::uint64_t seed) {
  for (std::uint64_t s = seed;; ++s) {
    auto g = gnp(n, p, s);
    if (is_connected(g)) return g;
  }
}

Graph planted_partition(std::size_t blocks, std::size_t block_size, double p_in, double p_out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution in(p_in);
  std::bernoulli_distribution out(p_out);
  const std::size_t n = blocks * block_size;
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool same = u / block_size == v / block_size;
      if (same ? in(rng) : out(rng)) edges.emplace_back(u, v);
    }
  }
  return graph_from(n, edges);
}

CoordinateSample reference_heavy_hitter(const Graph& g, int depth, int p, double epsilon, std::uint64_t coordinate,
                                        std::uint64_t seed, FallbackPolicy fallback) {
  const TokenUniverse universe(std::vector<std::string>(g.tokens().begin(), g.tokens().end()));
  const std::size_t n = g.node_count();
  CoordinateSample out;
  out.token.assign(n, kNoToken);
  out.status.assign(n, CellStatus::empty);
  out.threshold.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    const auto f = oracle::khop_frequency(g, u, depth);
    TokenId best = kNoToken;
    double best_weight = -1.0;
    double threshold = 0.0;
    std::optional<NormCountSketch> cs;
    if (p == 2) {
      cs.emplace(CountSketchHasher(NormCountSketch::kDefaultDepth, NormCountSketch::width_for_epsilon(epsilon), seed,
                                   coordinate));
    }
    for (const NodeId x : f.support()) {
      const TokenId t = *universe.find(g.token(x));
      const double r = uniform01(seed, coordinate, token_digest(g.token(x)));
      const double scale = p == 1 ? 1.0 / r : 1.0 / std::sqrt(r);
      const double w = f[x] * scale;
      if (w > best_weight || (w == best_weight && t < best)) {
        best_weight = w;
        best = t;
      }
      if (p == 1) threshold += f[x];
      if (cs) cs->update(token_digest(g.token(x)), f[x]);
    }
    if (cs) threshold = cs->estimate_l2();
    out.threshold[u] = threshold;
    if (best == kNoToken) continue;
    if (best_weight >= threshold) {
      out.token[u] = best;
      out.status[u] = CellStatus::sampled;
    } else if (fallback == FallbackPolicy::heaviest) {
      out.token[u] = best;
      out.status[u] = CellStatus::fallback;
    }
  }
  return out;
}

double total_variation(const std::vector<std::size_t>& counts, std::size_t total, const std::vector<double>& law) {
  double tv = 0.0;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double emp = total == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(total);
    tv += std::abs(emp - law[i]);
  }
  return 0.5 * tv;
}

}  // namespace lone::testing
