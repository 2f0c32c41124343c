#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lone/detail/propagation.hpp"
#include "lone/error.hpp"
#include "lone/hashing.hpp"
#include "lone/sampler.hpp"

namespace lone {

namespace {

// Order-independent summary of one pass's edge multiset.
struct PassFingerprint {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  std::uint64_t mixed_sum = 0;

  void add(NodeId u, NodeId v, bool directed) {
    if (!directed && v < u) std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    ++count;
    sum += mix64(key);
    mixed_sum += mix64(key ^ 0x5851F42D4C957F2DULL) * 0x2545F4914F6CDD1DULL;
  }
  friend bool operator==(const PassFingerprint&, const PassFingerprint&) = default;
};

class StreamingState {
 public:
  StreamingState(const SamplingProblem& problem, const SamplerConfig& cfg, bool directed)
      : problem_(problem), cfg_(cfg), directed_(directed), n_(problem.node_count()), d_(cfg.dimensions) {
    ranks_.reserve(d_);
    scales_.reserve(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      ranks_.push_back(detail::token_ranks(problem.universe(), cfg.seed, j));
      if (cfg.method == Method::l1 || cfg.method == Method::l2) {
        scales_.push_back(detail::reweighting_scale(ranks_.back(), cfg.method == Method::l1 ? 1 : 2));
      }
    }
    switch (cfg.method) {
      case Method::l0:
        for (std::size_t j = 0; j < d_; ++j) min_.push_back(detail::initial_min_pairs(problem, ranks_[j]));
        break;
      case Method::l2:
        for (std::size_t j = 0; j < d_; ++j) {
          hashers_.emplace_back(NormCountSketch::kDefaultDepth,
                                NormCountSketch::width_for_epsilon(cfg.norm_epsilon), cfg.seed, j);
          blocks_.push_back(detail::initial_count_sketches(problem, hashers_.back()));
        }
        [[fallthrough]];
      case Method::l1:
        for (std::size_t j = 0; j < d_; ++j) {
          counters_.push_back(detail::initial_counters(problem, cfg.sketch_capacity, scales_[j]));
        }
        masses_ = detail::initial_masses(problem);
        break;
      case Method::random_walk:
        position_.assign(d_, std::vector<NodeId>(n_));
        for (auto& pos : position_) {
          for (NodeId u = 0; u < n_; ++u) pos[u] = u;
        }
        break;
    }
  }

  void run_pass(EdgeStream& stream, int step, PassFingerprint& fingerprint) {
    switch (cfg_.method) {
      case Method::l0: min_pass(stream, fingerprint); break;
      case Method::l1:
      case Method::l2: counter_pass(stream, fingerprint); break;
      case Method::random_walk: walk_pass(stream, step, fingerprint); break;
    }
  }

  EmbeddingResult finish() const {
    const auto rows = problem_.node_tokens();
    EmbeddingResult result{
        EmbeddingMatrix(std::vector<std::string>(rows.begin(), rows.end()), d_, problem_.shared_universe(), cfg_),
        {}};
    auto& diag = result.diagnostics;
    diag.sampled.assign(d_, 0);
    diag.fallback.assign(d_, 0);
    diag.empty.assign(d_, 0);
    diag.node_threshold.assign(n_, 0.0);
    for (std::size_t j = 0; j < d_; ++j) {
      for (NodeId u = 0; u < n_; ++u) {
        detail::Selection pick;
        double threshold = 0.0;
        switch (cfg_.method) {
          case Method::l0:
            pick = {min_[j][u].token, min_[j][u].empty() ? CellStatus::empty : CellStatus::sampled};
            break;
          case Method::l1:
          case Method::l2:
            threshold = cfg_.method == Method::l1 ? masses_[u] : l2_estimate(j, u);
            pick = detail::select_heavy_hitter(counters_[j][u], scales_[j], threshold, cfg_.fallback);
            break;
          case Method::random_walk: {
            const auto token =
                detail::walk_token(problem_, cfg_.seed, j, problem_.node_digest(u), position_[j][u]);
            pick = {token, token == kNoToken ? CellStatus::empty : CellStatus::sampled};
            break;
          }
        }
        result.matrix.set(u, j, pick.token, pick.status);
        diag.node_threshold[u] += threshold;
        switch (pick.status) {
          case CellStatus::sampled: ++diag.sampled[j]; break;
          case CellStatus::fallback: ++diag.fallback[j]; break;
          case CellStatus::empty: ++diag.empty[j]; break;
        }
      }
    }
    for (auto& t : diag.node_threshold) t /= static_cast<double>(d_);
    return result;
  }

  void check_count_range() const {
    for (const double m : masses_) {
      if (m > detail::kExactCountLimit) throw Error("walk counts exceed 2^53; choose a smaller k");
    }
  }

 private:
  void check_node(NodeId u) const {
    if (u >= n_) throw Error("edge stream references node id outside the manifest");
  }

  void min_pass(EdgeStream& stream, PassFingerprint& fingerprint) {
    auto next = min_;
    stream.replay([&](NodeId x, NodeId y) {
      check_node(x);
      check_node(y);
      fingerprint.add(x, y, directed_);
      if (x == y) return;
      for (std::size_t j = 0; j < d_; ++j) {
        next[j][x] = minpair_merge(next[j][x], min_[j][y]);
        if (!directed_) next[j][y] = minpair_merge(next[j][y], min_[j][x]);
      }
    });
    min_ = std::move(next);
  }

  void counter_pass(EdgeStream& stream, PassFingerprint& fingerprint) {
    const std::size_t compact_at = 4 * cfg_.sketch_capacity;
    auto acc = counters_;
    auto next_masses = masses_;
    auto next_blocks = blocks_;
    const std::size_t block = hashers_.empty() ? 0 : hashers_.front().depth() * hashers_.front().width();

    auto absorb = [&](NodeId into, NodeId from) {
      next_masses[into] += masses_[from];
      for (std::size_t j = 0; j < d_; ++j) {
        auto& buffer = acc[j][into];
        const auto& incoming = counters_[j][from];
        buffer.insert(buffer.end(), incoming.begin(), incoming.end());
        if (buffer.size() > compact_at) detail::combine_duplicates(buffer);
        if (block) {
          double* out = next_blocks[j].data() + into * block;
          const double* in = blocks_[j].data() + from * block;
          for (std::size_t c = 0; c < block; ++c) out[c] += in[c];
        }
      }
    };
    stream.replay([&](NodeId x, NodeId y) {
      check_node(x);
      check_node(y);
      fingerprint.add(x, y, directed_);
      if (x == y) return;
      absorb(x, y);
      if (!directed_) absorb(y, x);
    });
    for (std::size_t j = 0; j < d_; ++j) {
      for (NodeId u = 0; u < n_; ++u) {
        detail::combine_duplicates(acc[j][u]);
        detail::prune_ranked(acc[j][u], cfg_.sketch_capacity, scales_[j]);
      }
    }
    counters_ = std::move(acc);
    masses_ = std::move(next_masses);
    blocks_ = std::move(next_blocks);
  }

  void walk_pass(EdgeStream& stream, int step, PassFingerprint& fingerprint) {
    // walkers_at[j]: CSR index from current position to walkers standing there.
    std::vector<std::vector<std::size_t>> offsets(d_, std::vector<std::size_t>(n_ + 1, 0));
    std::vector<std::vector<NodeId>> walkers(d_, std::vector<NodeId>(n_));
    for (std::size_t j = 0; j < d_; ++j) {
      for (NodeId w = 0; w < n_; ++w) ++offsets[j][position_[j][w] + 1];
      for (NodeId x = 0; x < n_; ++x) offsets[j][x + 1] += offsets[j][x];
      auto fill = offsets[j];
      for (NodeId w = 0; w < n_; ++w) walkers[j][fill[position_[j][w]]++] = w;
    }
    std::vector<std::vector<NodeId>> best(d_, std::vector<NodeId>(n_, kNoNode));
    std::vector<std::vector<std::uint64_t>> best_key(d_, std::vector<std::uint64_t>(n_, 0));

    auto offer = [&](NodeId at, NodeId to) {
      for (std::size_t j = 0; j < d_; ++j) {
        for (std::size_t i = offsets[j][at]; i < offsets[j][at + 1]; ++i) {
          const NodeId w = walkers[j][i];
          const auto key = detail::walk_key(cfg_.seed, j, problem_.node_digest(w), step, problem_.node_digest(to));
          if (best[j][w] == kNoNode || key < best_key[j][w] || (key == best_key[j][w] && to < best[j][w])) {
            best[j][w] = to;
            best_key[j][w] = key;
          }
        }
      }
    };
    stream.replay([&](NodeId x, NodeId y) {
      check_node(x);
      check_node(y);
      fingerprint.add(x, y, directed_);
      if (x == y) return;
      offer(x, y);
      if (!directed_) offer(y, x);
    });
    for (std::size_t j = 0; j < d_; ++j) {
      for (NodeId w = 0; w < n_; ++w) {
        if (best[j][w] != kNoNode) position_[j][w] = best[j][w];
      }
    }
  }

  double l2_estimate(std::size_t j, NodeId u) const {
    const auto& hasher = hashers_[j];
    const std::size_t block = hasher.depth() * hasher.width();
    return estimate_l2_from_counters(std::span(blocks_[j]).subspan(u * block, block), hasher.depth(),
                                     hasher.width());
  }

  static constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

  const SamplingProblem& problem_;
  SamplerConfig cfg_;
  bool directed_;
  std::size_t n_;
  std::size_t d_;
  std::vector<std::vector<double>> ranks_;
  std::vector<std::vector<double>> scales_;
  std::vector<std::vector<MinPairSketch>> min_;
  std::vector<detail::CounterState> counters_;
  std::vector<double> masses_;
  std::vector<CountSketchHasher> hashers_;
  std::vector<std::vector<double>> blocks_;
  std::vector<std::vector<NodeId>> position_;
};

}  // namespace

EmbeddingResult streaming_pass_driver(EdgeStream& stream, const SamplingProblem& problem, const SamplerConfig& cfg,
                                      bool directed) {
  cfg.validate();
  if (cfg.attribute_mode != problem.attribute_mode()) {
    throw std::invalid_argument("attribute mode of config and sampling problem differ");
  }
  StreamingState state(problem, cfg, directed);
  std::optional<PassFingerprint> first;
  for (int pass = 0; pass < cfg.depth; ++pass) {
    PassFingerprint fingerprint;
    state.run_pass(stream, pass, fingerprint);
    if (!first) {
      first = fingerprint;
    } else if (!(fingerprint == *first)) {
      throw Error("edge stream pass " + std::to_string(pass + 1) + " yielded a different edge multiset than pass 1");
    }
    state.check_count_range();
  }
  return state.finish();
}

}  // namespace lone
