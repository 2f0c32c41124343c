#include "lone/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lone::oracle {

std::vector<NodeId> FrequencyVector::support() const {
  std::vector<NodeId> out;
  for (NodeId z = 0; z < counts.size(); ++z) {
    if (counts[z] != 0.0) out.push_back(z);
  }
  return out;
}

double FrequencyVector::l1() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

double FrequencyVector::l2_squared() const {
  double s = 0.0;
  for (const double c : counts) s += c * c;
  return s;
}

double FrequencyVector::l2() const { return std::sqrt(l2_squared()); }

FrequencyVector khop_frequency(const Graph& g, NodeId u, int k) {
  g.check_node(u);
  if (k < 0) throw std::invalid_argument("depth must be non-negative");
  // Row u of (I + A)^k: push the row vector along out-edges k times.
  std::vector<double> row(g.node_count(), 0.0);
  row[u] = 1.0;
  for (int i = 0; i < k; ++i) {
    std::vector<double> next = row;
    for (NodeId w = 0; w < g.node_count(); ++w) {
      if (row[w] == 0.0) continue;
      for (const NodeId z : g.neighbors(w)) next[z] += row[w];
    }
    row = std::move(next);
  }
  return FrequencyVector{u, k, std::move(row)};
}

std::vector<double> l1_norms_exact(const Graph& g, int k) {
  if (k < 0) throw std::invalid_argument("depth must be non-negative");
  std::vector<double> norms(g.node_count(), 1.0);
  for (int i = 0; i < k; ++i) {
    std::vector<double> next(norms.size());
    for (NodeId u = 0; u < g.node_count(); ++u) {
      double s = norms[u];
      for (const NodeId v : g.neighbors(u)) s += norms[v];
      next[u] = s;
    }
    norms = std::move(next);
  }
  return norms;
}

double l1_norm_exact(const Graph& g, NodeId u, int k) {
  g.check_node(u);
  return l1_norms_exact(g, k)[u];
}

double l2_norm_exact(const Graph& g, NodeId u, int k) { return khop_frequency(g, u, k).l2(); }

double jaccard(const Graph& g, NodeId u, NodeId v, int k) {
  const auto a = khop_neighborhood_set(g, u, k);
  const auto b = khop_neighborhood_set(g, v, k);
  std::vector<NodeId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  const auto unions = a.size() + b.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(unions);
}

double minsum_similarity(const FrequencyVector& a, const FrequencyVector& b, int p) {
  if (p != 1 && p != 2) throw std::invalid_argument("p must be 1 or 2");
  const double na = p == 1 ? a.l1() : a.l2_squared();
  const double nb = p == 1 ? b.l1() : b.l2_squared();
  double s = 0.0;
  for (std::size_t x = 0; x < a.counts.size(); ++x) {
    const double pa = std::pow(a.counts[x], p) / na;
    const double pb = std::pow(b.counts[x], p) / nb;
    s += std::min(pa, pb);
  }
  return std::clamp(s, 0.0, 1.0);
}

double minsum_similarity(const Graph& g, NodeId u, NodeId v, int k, int p) {
  return minsum_similarity(khop_frequency(g, u, k), khop_frequency(g, v, k), p);
}

CosineSimilarities cosine_and_sqrtcos(const Graph& g, NodeId u, NodeId v, int k) {
  const auto a = khop_frequency(g, u, k);
  const auto b = khop_frequency(g, v, k);
  double dot = 0.0;
  for (std::size_t x = 0; x < a.counts.size(); ++x) dot += a.counts[x] * b.counts[x];
  return {dot / (a.l2() * b.l2()), dot / (std::sqrt(a.l1()) * std::sqrt(b.l1()))};
}

std::map<NodeId, double> exact_sampling_distribution(const Graph& g, NodeId u, int k, Lp method) {
  const auto f = khop_frequency(g, u, k);
  std::map<NodeId, double> out;
  const auto support = f.support();
  switch (method) {
    case Lp::l0:
      for (const NodeId z : support) out[z] = 1.0 / static_cast<double>(support.size());
      break;
    case Lp::l1: {
      const double norm = f.l1();
      for (const NodeId z : support) out[z] = f[z] / norm;
      break;
    }
    case Lp::l2: {
      const double norm = f.l2_squared();
      for (const NodeId z : support) out[z] = f[z] * f[z] / norm;
      break;
    }
  }
  return out;
}

}  // namespace lone::oracle
