#include "lone/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "lone/detail/propagation.hpp"
#include "lone/error.hpp"
#include "lone/hashing.hpp"

namespace lone {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::l0: return "l0";
    case Method::l1: return "l1";
    case Method::l2: return "l2";
    case Method::random_walk: return "rw";
  }
  return "?";
}

std::string_view to_string(FallbackPolicy p) noexcept {
  return p == FallbackPolicy::heaviest ? "heaviest" : "empty";
}

std::string_view to_string(CellStatus s) noexcept {
  switch (s) {
    case CellStatus::sampled: return "sampled";
    case CellStatus::fallback: return "fallback";
    case CellStatus::empty: return "empty";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
  if (s == "l0") return Method::l0;
  if (s == "l1") return Method::l1;
  if (s == "l2") return Method::l2;
  if (s == "rw") return Method::random_walk;
  return std::nullopt;
}

std::optional<FallbackPolicy> parse_fallback(std::string_view s) noexcept {
  if (s == "heaviest") return FallbackPolicy::heaviest;
  if (s == "empty") return FallbackPolicy::empty;
  return std::nullopt;
}

std::size_t default_sketch_capacity(std::size_t node_count) {
  if (node_count < 2) return 10;
  const auto log_bound = static_cast<std::size_t>(std::ceil(2.0 * std::log2(static_cast<double>(node_count)))) + 1;
  return std::max<std::size_t>(10, log_bound);
}

void SamplerConfig::validate() const {
  if (depth < 0) throw std::invalid_argument("depth k must be >= 0");
  if (dimensions < 1) throw std::invalid_argument("dimensions d must be >= 1");
  if ((method == Method::l1 || method == Method::l2) && sketch_capacity < 1) {
    throw std::invalid_argument("sketch capacity must be >= 1");
  }
  if (method == Method::l2 && !(norm_epsilon > 0.0 && norm_epsilon < 1.0)) {
    throw std::invalid_argument("norm epsilon must lie in (0, 1)");
  }
}

TokenUniverse::TokenUniverse(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
  if (tokens_.size() >= kNoToken) throw std::length_error("token universe too large");
  digests_.reserve(tokens_.size());
  for (const auto& t : tokens_) digests_.push_back(token_digest(t));
}

std::optional<TokenId> TokenUniverse::find(std::string_view token) const {
  const auto it = std::lower_bound(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end() || *it != token) return std::nullopt;
  return static_cast<TokenId>(it - tokens_.begin());
}

SamplingProblem SamplingProblem::nodes(std::span<const std::string> node_tokens) {
  SamplingProblem p;
  p.node_tokens_.assign(node_tokens.begin(), node_tokens.end());
  p.universe_ = std::make_shared<const TokenUniverse>(p.node_tokens_);
  p.offsets_.resize(node_tokens.size() + 1);
  std::iota(p.offsets_.begin(), p.offsets_.end(), std::size_t{0});
  p.initial_.reserve(node_tokens.size());
  p.node_digests_.reserve(node_tokens.size());
  for (const auto& token : node_tokens) {
    const auto id = p.universe_->find(token);
    p.initial_.push_back(*id);
    p.node_digests_.push_back(p.universe_->digest(*id));
  }
  if (p.universe_->size() != node_tokens.size()) throw std::invalid_argument("duplicate node tokens");
  return p;
}

SamplingProblem SamplingProblem::attributes(std::span<const std::string> node_tokens, const AttributeTable& attrs) {
  if (attrs.node_count() != node_tokens.size()) {
    throw std::invalid_argument("attribute table does not match the node count");
  }
  SamplingProblem p;
  p.attribute_mode_ = true;
  p.node_tokens_.assign(node_tokens.begin(), node_tokens.end());
  p.universe_ = std::make_shared<const TokenUniverse>(
      std::vector<std::string>(attrs.universe().begin(), attrs.universe().end()));
  std::vector<TokenId> remap(attrs.universe_size());
  for (AttrId a = 0; a < attrs.universe_size(); ++a) remap[a] = *p.universe_->find(attrs.token(a));
  p.offsets_.push_back(0);
  for (NodeId u = 0; u < node_tokens.size(); ++u) {
    std::vector<TokenId> ids;
    for (const AttrId a : attrs.attributes(u)) ids.push_back(remap[a]);
    std::sort(ids.begin(), ids.end());
    p.initial_.insert(p.initial_.end(), ids.begin(), ids.end());
    p.offsets_.push_back(p.initial_.size());
    p.node_digests_.push_back(token_digest(node_tokens[u]));
  }
  return p;
}

namespace {

void check_problem(const Graph& g, const SamplingProblem& problem) {
  if (g.node_count() != problem.node_count()) {
    throw std::invalid_argument("sampling problem does not match the graph");
  }
}

CoordinateSample make_sample(std::size_t n) {
  CoordinateSample s;
  s.token.assign(n, kNoToken);
  s.status.assign(n, CellStatus::empty);
  s.threshold.assign(n, 0.0);
  return s;
}

CoordinateSample heavy_hitter_sample(const Graph& g, const SamplingProblem& problem, int depth, std::size_t capacity,
                                     std::uint64_t coordinate, std::uint64_t seed, FallbackPolicy fallback,
                                     int p, double epsilon) {
  check_problem(g, problem);
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  if (capacity == 0) throw std::invalid_argument("sketch capacity must be at least 1");
  const auto ranks = detail::token_ranks(problem.universe(), seed, coordinate);
  const auto scale = detail::reweighting_scale(ranks, p);
  auto counters = detail::propagate_counters(g, detail::initial_counters(problem, capacity, scale), capacity,
                                             scale, depth);
  auto sample = make_sample(g.node_count());
  if (p == 1) {
    sample.threshold = detail::propagate_scalar(g, detail::initial_masses(problem), depth);
  } else {
    const CountSketchHasher hasher(NormCountSketch::kDefaultDepth, NormCountSketch::width_for_epsilon(epsilon),
                                   seed, coordinate);
    const std::size_t block = hasher.depth() * hasher.width();
    const auto sketches =
        detail::propagate_blocks(g, detail::initial_count_sketches(problem, hasher), block, depth);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      sample.threshold[u] = estimate_l2_from_counters(std::span(sketches).subspan(u * block, block),
                                                      hasher.depth(), hasher.width());
    }
  }
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto pick = detail::select_heavy_hitter(counters[u], scale, sample.threshold[u], fallback);
    sample.token[u] = pick.token;
    sample.status[u] = pick.status;
  }
  return sample;
}

}  // namespace

CoordinateSample sample_l0_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                      std::uint64_t coordinate, std::uint64_t seed) {
  check_problem(g, problem);
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  const auto ranks = detail::token_ranks(problem.universe(), seed, coordinate);
  const auto state = detail::propagate_min(g, detail::initial_min_pairs(problem, ranks), depth);
  auto sample = make_sample(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    sample.token[u] = state[u].token;
    sample.status[u] = state[u].empty() ? CellStatus::empty : CellStatus::sampled;
  }
  return sample;
}

CoordinateSample sample_l1_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                      std::size_t capacity, std::uint64_t coordinate, std::uint64_t seed,
                                      FallbackPolicy fallback) {
  return heavy_hitter_sample(g, problem, depth, capacity, coordinate, seed, fallback, 1, 0.0);
}

CoordinateSample sample_l2_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                      std::size_t capacity, double epsilon, std::uint64_t coordinate,
                                      std::uint64_t seed, FallbackPolicy fallback) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  return heavy_hitter_sample(g, problem, depth, capacity, coordinate, seed, fallback, 2, epsilon);
}

CoordinateSample random_walk_coordinate(const Graph& g, const SamplingProblem& problem, int depth,
                                        std::uint64_t coordinate, std::uint64_t seed) {
  check_problem(g, problem);
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  auto sample = make_sample(g.node_count());
  for (NodeId start = 0; start < g.node_count(); ++start) {
    const auto start_digest = problem.node_digest(start);
    NodeId pos = start;
    for (int step = 0; step < depth; ++step) {
      const auto nbrs = g.neighbors(pos);
      if (nbrs.empty()) break;
      NodeId best = nbrs.front();
      auto best_key = detail::walk_key(seed, coordinate, start_digest, step, problem.node_digest(best));
      for (const NodeId y : nbrs.subspan(1)) {
        const auto key = detail::walk_key(seed, coordinate, start_digest, step, problem.node_digest(y));
        if (key < best_key) {
          best = y;
          best_key = key;
        }
      }
      pos = best;
    }
    sample.token[start] = detail::walk_token(problem, seed, coordinate, start_digest, pos);
    sample.status[start] = sample.token[start] == kNoToken ? CellStatus::empty : CellStatus::sampled;
  }
  return sample;
}

CoordinateSample sample_coordinate(const Graph& g, const SamplingProblem& problem, const SamplerConfig& cfg,
                                   std::uint64_t coordinate) {
  switch (cfg.method) {
    case Method::l0:
      return sample_l0_coordinate(g, problem, cfg.depth, coordinate, cfg.seed);
    case Method::l1:
      return sample_l1_coordinate(g, problem, cfg.depth, cfg.sketch_capacity, coordinate, cfg.seed, cfg.fallback);
    case Method::l2:
      return sample_l2_coordinate(g, problem, cfg.depth, cfg.sketch_capacity, cfg.norm_epsilon, coordinate,
                                  cfg.seed, cfg.fallback);
    case Method::random_walk:
      return random_walk_coordinate(g, problem, cfg.depth, coordinate, cfg.seed);
  }
  throw std::invalid_argument("unknown method");
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> row_tokens, std::size_t cols,
                                 std::shared_ptr<const TokenUniverse> universe, SamplerConfig config)
    : row_tokens_(std::move(row_tokens)),
      cols_(cols),
      tokens_(row_tokens_.size() * cols, kNoToken),
      status_(row_tokens_.size() * cols, CellStatus::empty),
      universe_(std::move(universe)),
      config_(config) {}

void EmbeddingMatrix::set(std::size_t r, std::size_t c, TokenId token, CellStatus status) {
  tokens_[r * cols_ + c] = token;
  status_[r * cols_ + c] = status;
}

void EmbeddingMatrix::set_column(std::size_t c, const CoordinateSample& sample) {
  for (std::size_t r = 0; r < rows(); ++r) set(r, c, sample.token[r], sample.status[r]);
}

bool operator==(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  const bool same_universe = a.universe_ == b.universe_ || (a.universe_ && b.universe_ && *a.universe_ == *b.universe_);
  return same_universe && a.row_tokens_ == b.row_tokens_ && a.cols_ == b.cols_ && a.tokens_ == b.tokens_ &&
         a.status_ == b.status_ && a.config_ == b.config_;
}

void check_exact_count_range(const Graph& g, const SamplingProblem& problem, int depth) {
  const auto masses = detail::propagate_scalar(g, detail::initial_masses(problem), depth);
  const auto peak = masses.empty() ? 0.0 : *std::max_element(masses.begin(), masses.end());
  if (peak > detail::kExactCountLimit) {
    throw Error("walk counts at depth " + std::to_string(depth) +
                " exceed 2^53; choose a smaller k for exact arithmetic");
  }
}

EmbeddingResult build_embedding(const Graph& g, const AttributeTable* attrs, const SamplerConfig& cfg,
                                unsigned workers) {
  cfg.validate();
  if (cfg.attribute_mode && attrs == nullptr) throw std::invalid_argument("attribute mode requires attributes");
  const auto problem = cfg.attribute_mode ? SamplingProblem::attributes(g.tokens(), *attrs)
                                          : SamplingProblem::nodes(g.tokens());
  check_exact_count_range(g, problem, cfg.depth);

  const std::size_t n = g.node_count();
  const std::size_t d = cfg.dimensions;
  EmbeddingResult result{
      EmbeddingMatrix(std::vector<std::string>(g.tokens().begin(), g.tokens().end()), d,
                      problem.shared_universe(), cfg),
      {}};
  auto& diag = result.diagnostics;
  diag.sampled.assign(d, 0);
  diag.fallback.assign(d, 0);
  diag.empty.assign(d, 0);
  std::vector<double> thresholds(n * d, 0.0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t j = next++; j < d; j = next++) {
        const auto sample = sample_coordinate(g, problem, cfg, j);
        result.matrix.set_column(j, sample);
        for (std::size_t u = 0; u < n; ++u) {
          thresholds[j * n + u] = sample.threshold[u];
          switch (sample.status[u]) {
            case CellStatus::sampled: ++diag.sampled[j]; break;
            case CellStatus::fallback: ++diag.fallback[j]; break;
            case CellStatus::empty: ++diag.empty[j]; break;
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = d;
    }
  };
  const unsigned threads = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, d));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  diag.node_threshold.assign(n, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t u = 0; u < n; ++u) diag.node_threshold[u] += thresholds[j * n + u];
  }
  for (auto& t : diag.node_threshold) t /= static_cast<double>(d);
  return result;
}

}  // namespace lone
