#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lone/graph.hpp"
#include "lone/sampler.hpp"

namespace lone::testing {

/// Tokens "n0", "n1", ... in id order.
std::vector<std::string> numbered_tokens(std::size_t n);

Graph graph_from(std::size_t n, const std::vector<Edge>& edges, bool directed = false);
/// a - b - c
Graph path3();
Graph cycle(std::size_t n);

/// Erdos-Renyi G(n, p) by geometric skipping (Batagelj-Brandes), O(n + m).
Graph gnp(std::size_t n, double p, std::uint64_t seed);
/// Random spanning tree plus `extra` random chords.
Graph random_connected(std::size_t n, std::size_t extra, std::uint64_t seed);
/// Connected G(n, p): redraws with successive seeds until connected.
Graph connected_gnp(std::size_t n, double p, std::uint64_t seed);
/// `blocks` communities of `block_size` nodes.
Graph planted_partition(std::size_t blocks, std::size_t block_size, double p_in, double p_out, std::uint64_t seed);

/// Unsketched L1/L2 sampler: full f^k_u from the oracle, argmax of f[x] /
/// r(x)^(1/p), threshold ||f||_1 (p = 1) or a CountSketch estimate of the
/// exact f (p = 2).
CoordinateSample reference_heavy_hitter(const Graph& g, int depth, int p, double epsilon, std::uint64_t coordinate,
                                        std::uint64_t seed, FallbackPolicy fallback = FallbackPolicy::heaviest);

/// Total variation distance between an empirical histogram and a law.
double total_variation(const std::vector<std::size_t>& counts, std::size_t total, const std::vector<double>& law);

}  // namespace lone::testing
