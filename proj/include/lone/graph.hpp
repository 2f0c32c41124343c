#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lone {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable adjacency over dense node ids [0, n).
///
/// External tokens are interned in first-appearance order. Undirected graphs
/// store both directions; `neighbors(u)` is sorted and free of duplicates and
/// self-loops. For directed graphs `neighbors(u)` holds out-neighbours.
class Graph {
 public:
  struct BuildStats {
    std::size_t duplicate_edges = 0;
    std::size_t self_loops = 0;
  };

  Graph() = default;

  /// Builds a graph over `tokens`; edges reference indices into `tokens`.
  /// Duplicates and self-loops are dropped and counted in `stats`.
  static Graph from_edges(std::vector<std::string> tokens, std::span<const Edge> edges,
                          bool directed, BuildStats* stats = nullptr);

  std::size_t node_count() const noexcept { return tokens_.size(); }
  /// Undirected: number of distinct unordered pairs. Directed: number of arcs.
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool directed() const noexcept { return directed_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  const std::string& token(NodeId u) const { return tokens_[u]; }
  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::optional<NodeId> find(std::string_view token) const;

  /// Every edge once: (u, v) with u < v when undirected, arcs when directed.
  std::vector<Edge> edges() const;

  /// Structural equality on external tokens: same token set and the same
  /// token-level adjacency, independent of dense id assignment.
  bool same_structure(const Graph& other) const;
  friend bool operator==(const Graph& a, const Graph& b) { return a.same_structure(b); }

  void check_node(NodeId u) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::size_t edge_count_ = 0;
  bool directed_ = false;
};

struct LoadOptions {
  bool directed = false;
  /// Optional node manifest; these tokens are interned first and may be
  /// isolated.
  std::vector<std::string> manifest;
};

struct EdgeListLoad {
  Graph graph;
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
};

/// Parses a whitespace-separated edge list. `#` starts a comment line,
/// tokens after the second are ignored (edge weights are not used).
EdgeListLoad load_edge_list(std::istream& in, const LoadOptions& options = {});

/// One token per line; blank and `#` lines skipped.
std::vector<std::string> load_node_manifest(std::istream& in);

using AttrId = std::uint32_t;

/// Per-node attribute token lists, interned into their own universe.
class AttributeTable {
 public:
  AttributeTable() = default;
  AttributeTable(std::vector<std::string> universe, std::vector<std::vector<AttrId>> per_node);

  std::size_t node_count() const noexcept { return per_node_.size(); }
  std::size_t universe_size() const noexcept { return universe_.size(); }
  std::span<const AttrId> attributes(NodeId u) const { return per_node_[u]; }
  const std::string& token(AttrId a) const { return universe_[a]; }
  std::span<const std::string> universe() const noexcept { return universe_; }

 private:
  std::vector<std::string> universe_;
  std::vector<std::vector<AttrId>> per_node_;
};

/// Reads `node<TAB>attr1 attr2 ...` lines. Nodes without a line get an
/// empty list; unknown nodes and repeated node lines are errors.
AttributeTable load_attributes(std::istream& in, const Graph& g);

/// Nodes within `k` hops of `u` (including `u`), sorted by id.
std::vector<NodeId> khop_neighborhood_set(const Graph& g, NodeId u, int k);

/// Whether every node reaches every other (undirected view).
bool is_connected(const Graph& g);

/// A replayable sequence of edges over dense ids. Each call to `replay` is one
/// pass; passes must yield the same multiset, order may differ.
class EdgeStream {
 public:
  virtual ~EdgeStream() = default;
  virtual void replay(const std::function<void(NodeId, NodeId)>& sink) = 0;
};

/// In-memory stream. With a shuffle seed, each pass visits the edges in a
/// different seeded order.
class MemoryEdgeStream : public EdgeStream {
 public:
  explicit MemoryEdgeStream(std::vector<Edge> edges, std::optional<std::uint64_t> shuffle_seed = {});
  void replay(const std::function<void(NodeId, NodeId)>& sink) override;
  std::size_t passes() const noexcept { return passes_; }

 private:
  std::vector<Edge> edges_;
  std::optional<std::uint64_t> shuffle_seed_;
  std::size_t passes_ = 0;
};

/// Re-reads an edge-list file on every pass, resolving tokens through `ids`.
/// Self-loops are skipped; duplicate lines are passed through.
class EdgeListFileStream : public EdgeStream {
 public:
  EdgeListFileStream(std::string path, const std::unordered_map<std::string, NodeId>* ids);
  void replay(const std::function<void(NodeId, NodeId)>& sink) override;

 private:
  std::string path_;
  const std::unordered_map<std::string, NodeId>* ids_;
};

/// First pass of the streaming model: interns node tokens (manifest first,
/// then edge endpoints in first-appearance order) without storing edges.
std::vector<std::string> scan_edge_list_tokens(std::istream& in, const std::vector<std::string>& manifest);

}  // namespace lone
