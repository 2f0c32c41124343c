#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "lone/graph.hpp"

// Brute-force reference computations. Everything here materialises full
// n-dimensional vectors and is meant for small graphs and verification.
namespace lone::oracle {

/// f^k_u: walk counts under f^k_u = f^{k-1}_u + sum_{v in N(u)} f^{k-1}_v,
/// with f^0_u the unit vector at u. Stored densely.
struct FrequencyVector {
  NodeId node = 0;
  int depth = 0;
  std::vector<double> counts;

  double operator[](NodeId z) const { return counts[z]; }
  std::vector<NodeId> support() const;
  double l1() const;
  double l2() const;
  double l2_squared() const;
};

enum class Lp { l0 = 0, l1 = 1, l2 = 2 };

FrequencyVector khop_frequency(const Graph& g, NodeId u, int k);

/// ||f^k_u||_1 via the scalar recurrence n^k_u = n^{k-1}_u + sum_v n^{k-1}_v,
/// without materialising vectors.
double l1_norm_exact(const Graph& g, NodeId u, int k);
/// The same recurrence for every node at once.
std::vector<double> l1_norms_exact(const Graph& g, int k);

double l2_norm_exact(const Graph& g, NodeId u, int k);

double jaccard(const Graph& g, NodeId u, NodeId v, int k);

/// sum_x min(f_u[x]^p / ||f_u||_p^p, f_v[x]^p / ||f_v||_p^p) for p in {1, 2}.
double minsum_similarity(const Graph& g, NodeId u, NodeId v, int k, int p);
double minsum_similarity(const FrequencyVector& a, const FrequencyVector& b, int p);

struct CosineSimilarities {
  double cosine = 0.0;
  double sqrt_cosine = 0.0;
};
CosineSimilarities cosine_and_sqrtcos(const Graph& g, NodeId u, NodeId v, int k);

/// Exact target law of coordinated L_p sampling at node u.
std::map<NodeId, double> exact_sampling_distribution(const Graph& g, NodeId u, int k, Lp method);

}  // namespace lone::oracle
