#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lone/graph.hpp"
#include "lone/sketches.hpp"

namespace lone {

enum class Method { l0, l1, l2, random_walk };
enum class FallbackPolicy { heaviest, empty };
enum class CellStatus : std::uint8_t { sampled = 0, fallback = 1, empty = 2 };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(FallbackPolicy p) noexcept;
std::string_view to_string(CellStatus s) noexcept;
std::optional<Method> parse_method(std::string_view s) noexcept;
std::optional<FallbackPolicy> parse_fallback(std::string_view s) noexcept;

/// max(10, ceil(2 log2 n) + 1).
std::size_t default_sketch_capacity(std::size_t node_count);

struct SamplerConfig {
  Method method = Method::l1;
  int depth = 1;
  std::size_t dimensions = 50;
  std::size_t sketch_capacity = 10;
  /// Accuracy of the L2 norm sketch; only used by Method::l2.
  double norm_epsilon = 0.1;
  std::uint64_t seed = 0;
  bool attribute_mode = false;
  FallbackPolicy fallback = FallbackPolicy::heaviest;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

/// Sorted, deduplicated token strings. A TokenId is an index into it, so
/// comparing ids compares tokens lexicographically.
class TokenUniverse {
 public:
  explicit TokenUniverse(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(TokenId t) const { return tokens_[t]; }
  std::uint64_t digest(TokenId t) const { return digests_[t]; }
  std::span<const std::string> tokens() const noexcept { return tokens_; }
  std::optional<TokenId> find(std::string_view token) const;

  friend bool operator==(const TokenUniverse& a, const TokenUniverse& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> digests_;
};

/// Node-side setup shared by every coordinate: which universe is sampled and
/// the tokens each node starts with (itself, or its attributes).
class SamplingProblem {
 public:
  static SamplingProblem nodes(std::span<const std::string> node_tokens);
  static SamplingProblem attributes(std::span<const std::string> node_tokens, const AttributeTable& attrs);

  bool attribute_mode() const noexcept { return attribute_mode_; }
  std::size_t node_count() const noexcept { return node_digests_.size(); }
  const TokenUniverse& universe() const noexcept { return *universe_; }
  std::shared_ptr<const TokenUniverse> shared_universe() const noexcept { return universe_; }
  std::span<const TokenId> initial_tokens(NodeId u) const {
    return {initial_.data() + offsets_[u], initial_.data() + offsets_[u + 1]};
  }
  std::uint64_t node_digest(NodeId u) const { return node_digests_[u]; }
  std::span<const std::string> node_tokens() const noexcept { return node_tokens_; }

 private:
  bool attribute_mode_ = false;
  std::shared_ptr<const TokenUniverse> universe_;
  std::vector<std::size_t> offsets_;
  std::vector<TokenId> initial_;
  std::vector<std::uint64_t> node_digests_;
  std::vector<std::string> node_tokens_;
};

/// One embedding coordinate for every node.
struct CoordinateSample {
  std::vector<TokenId> token;
  std::vector<CellStatus> status;
  /// Sampling threshold per node (||f||_1 for L1, estimated ||f||_2 for L2,
  /// 0 otherwise).
  std::vector<double> threshold;
};

CoordinateSample sample_l0_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                      std::uint64_t coordinate, std::uint64_t seed);
CoordinateSample sample_l1_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                      std::size_t capacity, std::uint64_t coordinate, std::uint64_t seed,
                                      FallbackPolicy fallback = FallbackPolicy::heaviest);
CoordinateSample sample_l2_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                      std::size_t capacity, double epsilon, std::uint64_t coordinate,
                                      std::uint64_t seed, FallbackPolicy fallback = FallbackPolicy::heaviest);
CoordinateSample random_walk_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                        std::uint64_t coordinate, std::uint64_t seed);

/// Dispatches on `cfg.method`.
CoordinateSample sample_coordinate(const Graph& g, const SamplingProblem& problem, const SamplerConfig& cfg,
                                   std::uint64_t coordinate);

/// n x d matrix of sampled tokens with per-cell status.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::vector<std::string> row_tokens, std::size_t cols,
                  std::shared_ptr<const TokenUniverse> universe, SamplerConfig config);

  std::size_t rows() const noexcept { return row_tokens_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  TokenId token(std::size_t r, std::size_t c) const { return tokens_[r * cols_ + c]; }
  CellStatus status(std::size_t r, std::size_t c) const { return status_[r * cols_ + c]; }
  std::span<const TokenId> row(std::size_t r) const { return {tokens_.data() + r * cols_, cols_}; }
  void set(std::size_t r, std::size_t c, TokenId token, CellStatus status);
  void set_column(std::size_t c, const CoordinateSample& sample);

  const std::string& row_token(std::size_t r) const { return row_tokens_[r]; }
  std::span<const std::string> row_tokens() const noexcept { return row_tokens_; }
  const TokenUniverse& universe() const noexcept { return *universe_; }
  std::shared_ptr<const TokenUniverse> shared_universe() const noexcept { return universe_; }
  const SamplerConfig& config() const noexcept { return config_; }

  friend bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

 private:
  std::vector<std::string> row_tokens_;
  std::size_t cols_ = 0;
  std::vector<TokenId> tokens_;
  std::vector<CellStatus> status_;
  std::shared_ptr<const TokenUniverse> universe_;
  SamplerConfig config_;
};

struct CoordinateDiagnostics {
  std::vector<std::size_t> sampled;
  std::vector<std::size_t> fallback;
  std::vector<std::size_t> empty;
  /// Mean sampling threshold per node across coordinates.
  std::vector<double> node_threshold;

  friend bool operator==(const CoordinateDiagnostics&, const CoordinateDiagnostics&) = default;
};

struct EmbeddingResult {
  EmbeddingMatrix matrix;
  CoordinateDiagnostics diagnostics;
};

/// Column j is the coordinate sampler run with coordinate index j. Output is
/// identical for any `workers`. `attrs` is required in attribute mode.
EmbeddingResult build_embedding(const Graph& g, const AttributeTable* attrs, const SamplerConfig& cfg,
                                unsigned workers = 1);

/// Semi-streaming variant: keeps only per-node state and consumes
/// `cfg.depth` passes over `stream`. The result equals build_embedding on
/// the materialised graph. `problem` fixes the node set.
EmbeddingResult streaming_pass_driver(EdgeStream& stream, const SamplingProblem& problem,
                                      const SamplerConfig& cfg, bool directed = false);

/// Throws lone::Error if walk counts at `depth` would exceed 2^53 somewhere,
/// where double arithmetic stops being exact.
void check_exact_count_range(const Graph& g, const SamplingProblem& problem, int depth);

}  // namespace lone
