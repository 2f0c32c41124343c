#include "lone/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "lone/error.hpp"

namespace lone {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skip_line(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// Returns the two endpoint tokens of an edge line, or nothing for comments.
std::optional<std::pair<std::string_view, std::string_view>> parse_edge_line(std::string_view line,
                                                                             std::size_t lineno) {
  if (skip_line(line)) return std::nullopt;
  const auto parts = split_ws(line);
  if (parts.size() < 2) throw ParseError("expected at least two tokens per edge line", lineno);
  return std::make_pair(parts[0], parts[1]);
}

class Interner {
 public:
  NodeId intern(std::string_view token) {
    auto [it, inserted] = ids_.try_emplace(std::string(token), static_cast<NodeId>(tokens_.size()));
    if (inserted) tokens_.push_back(it->first);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(tokens_); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> tokens_;
};

}  // namespace

Graph Graph::from_edges(std::vector<std::string> tokens, std::span<const Edge> edges, bool directed,
                        BuildStats* stats) {
  Graph g;
  g.directed_ = directed;
  g.tokens_ = std::move(tokens);
  const auto n = g.tokens_.size();
  g.ids_.reserve(n);
  for (NodeId u = 0; u < n; ++u) {
    if (!g.ids_.emplace(g.tokens_[u], u).second) {
      throw std::invalid_argument("duplicate node token: " + g.tokens_[u]);
    }
  }

  BuildStats local;
  std::vector<Edge> arcs;
  arcs.reserve(directed ? edges.size() : 2 * edges.size());
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    arcs.emplace_back(u, v);
    if (!directed) arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  const auto before = arcs.size();
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  local.duplicate_edges = (before - arcs.size()) / (directed ? 1 : 2);

  g.offsets_.assign(n + 1, 0);
  for (const auto& a : arcs) ++g.offsets_[a.first + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adjacency_.resize(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) g.adjacency_[i] = arcs[i].second;
  g.edge_count_ = directed ? arcs.size() : arcs.size() / 2;
  if (stats) *stats = local;
  return g;
}

std::optional<NodeId> Graph::find(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < node_count(); ++u) {
    for (const NodeId v : neighbors(u)) {
      if (directed_ || u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool Graph::same_structure(const Graph& other) const {
  if (directed_ != other.directed_ || node_count() != other.node_count() ||
      edge_count_ != other.edge_count_) {
    return false;
  }
  for (NodeId u = 0; u < node_count(); ++u) {
    const auto mapped = other.find(tokens_[u]);
    if (!mapped) return false;
    std::vector<std::string_view> mine;
    std::vector<std::string_view> theirs;
    for (const NodeId v : neighbors(u)) mine.push_back(tokens_[v]);
    for (const NodeId v : other.neighbors(*mapped)) theirs.push_back(other.tokens_[v]);
    std::sort(mine.begin(), mine.end());
    std::sort(theirs.begin(), theirs.end());
    if (mine != theirs) return false;
  }
  return true;
}

void Graph::check_node(NodeId u) const {
  if (u >= node_count()) {
    throw std::out_of_range("node id " + std::to_string(u) + " out of range [0, " +
                            std::to_string(node_count()) + ")");
  }
}

EdgeListLoad load_edge_list(std::istream& in, const LoadOptions& options) {
  Interner interner;
  for (const auto& token : options.manifest) interner.intern(token);

  std::vector<Edge> edges;
  std::size_t self_loops = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto endpoints = parse_edge_line(line, lineno);
    if (!endpoints) continue;
    if (endpoints->first == endpoints->second) {
      ++self_loops;
      continue;
    }
    const NodeId u = interner.intern(endpoints->first);
    const NodeId v = interner.intern(endpoints->second);
    edges.emplace_back(u, v);
  }
  auto tokens = interner.take();
  if (tokens.empty()) throw ParseError("edge list contains no edges", 0);

  Graph::BuildStats stats;
  EdgeListLoad out;
  out.graph = Graph::from_edges(std::move(tokens), edges, options.directed, &stats);
  out.duplicate_edges = stats.duplicate_edges;
  out.self_loops = self_loops;
  return out;
}

std::vector<std::string> load_node_manifest(std::istream& in) {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::string token(trim(line));
    if (!seen.insert(token).second) throw ParseError("duplicate manifest token " + token, lineno);
    out.push_back(std::move(token));
  }
  return out;
}

AttributeTable::AttributeTable(std::vector<std::string> universe, std::vector<std::vector<AttrId>> per_node)
    : universe_(std::move(universe)), per_node_(std::move(per_node)) {
  for (auto& attrs : per_node_) {
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    if (!attrs.empty() && attrs.back() >= universe_.size()) {
      throw std::out_of_range("attribute id outside universe");
    }
  }
}

AttributeTable load_attributes(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, AttrId> ids;
  std::vector<std::string> universe;
  std::vector<std::vector<AttrId>> per_node(g.node_count());
  std::vector<bool> seen(g.node_count(), false);

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    std::string_view view(line);
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected node<TAB>attributes", lineno);
    const auto node_token = trim(view.substr(0, tab));
    const auto node = g.find(node_token);
    if (!node) throw ParseError("unknown node " + std::string(node_token), lineno);
    if (seen[*node]) throw ParseError("duplicate attribute line for node " + std::string(node_token), lineno);
    seen[*node] = true;
    for (const auto attr : split_ws(view.substr(tab + 1))) {
      auto [it, inserted] = ids.try_emplace(std::string(attr), static_cast<AttrId>(universe.size()));
      if (inserted) universe.push_back(it->first);
      per_node[*node].push_back(it->second);
    }
  }
  return AttributeTable(std::move(universe), std::move(per_node));
}

std::vector<NodeId> khop_neighborhood_set(const Graph& g, NodeId u, int k) {
  g.check_node(u);
  if (k < 0) throw std::invalid_argument("depth must be non-negative");
  std::vector<int> dist(g.node_count(), -1);
  std::vector<NodeId> frontier{u};
  std::vector<NodeId> reached{u};
  dist[u] = 0;
  for (int level = 1; level <= k && !frontier.empty(); ++level) {
    std::vector<NodeId> next;
    for (const NodeId x : frontier) {
      for (const NodeId y : g.neighbors(x)) {
        if (dist[y] < 0) {
          dist[y] = level;
          next.push_back(y);
          reached.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(reached.begin(), reached.end());
  return reached;
}

bool is_connected(const Graph& g) {
  const auto n = g.node_count();
  if (n <= 1) return true;
  // Union-find over the undirected view so directed graphs are handled too.
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto root = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (NodeId u = 0; u < n; ++u) {
    for (const NodeId v : g.neighbors(u)) {
      const auto a = root(u);
      const auto b = root(v);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  return components == 1;
}

MemoryEdgeStream::MemoryEdgeStream(std::vector<Edge> edges, std::optional<std::uint64_t> shuffle_seed)
    : edges_(std::move(edges)), shuffle_seed_(shuffle_seed) {}

void MemoryEdgeStream::replay(const std::function<void(NodeId, NodeId)>& sink) {
  if (shuffle_seed_) {
    std::mt19937_64 rng(*shuffle_seed_ + 0x9E3779B97F4A7C15ULL * (passes_ + 1));
    // Fisher-Yates with raw engine output keeps the order reproducible across
    // standard library implementations.
    for (std::size_t i = edges_.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(edges_[i - 1], edges_[j]);
    }
  }
  ++passes_;
  for (const auto& [u, v] : edges_) sink(u, v);
}

EdgeListFileStream::EdgeListFileStream(std::string path, const std::unordered_map<std::string, NodeId>* ids)
    : path_(std::move(path)), ids_(ids) {}

void EdgeListFileStream::replay(const std::function<void(NodeId, NodeId)>& sink) {
  std::ifstream in(path_);
  if (!in) throw Error("cannot open " + path_);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto endpoints = parse_edge_line(line, lineno);
    if (!endpoints || endpoints->first == endpoints->second) continue;
    const auto u = ids_->find(std::string(endpoints->first));
    const auto v = ids_->find(std::string(endpoints->second));
    if (u == ids_->end() || v == ids_->end()) {
      throw ParseError("token not seen in the discovery pass", lineno);
    }
    sink(u->second, v->second);
  }
}

std::vector<std::string> scan_edge_list_tokens(std::istream& in, const std::vector<std::string>& manifest) {
  Interner interner;
  for (const auto& token : manifest) interner.intern(token);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto endpoints = parse_edge_line(line, lineno);
    if (!endpoints || endpoints->first == endpoints->second) continue;
    interner.intern(endpoints->first);
    interner.intern(endpoints->second);
  }
  auto tokens = interner.take();
  if (tokens.empty()) throw ParseError("edge list contains no edges", 0);
  return tokens;
}

}  // namespace lone
