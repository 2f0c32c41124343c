#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "lone/embedding_io.hpp"
#include "lone/error.hpp"
#include "lone/evalkit.hpp"
#include "lone/featuremap.hpp"
#include "lone/graph.hpp"
#include "lone/oracle.hpp"
#include "lone/sampler.hpp"
#include "manifest.hpp"

namespace lone::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kOracleNodeLimit = 10000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << content) || !out.flush()) throw Error("cannot write " + path.string());
}

struct Run {
  const std::vector<std::string>& argv;
  std::ostream& out;
  std::ostream& err;
};

/// Writes `<primary>.manifest` describing this run.
void write_manifest(const Run& run, const std::string& command, const fs::path& primary,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                    const std::vector<std::pair<std::string, std::string>>& settings) {
  RunManifest m;
  m.set("tool", "lone");
  m.set("version", LONE_VERSION);
  m.set("command", command);
  m.add_argv(run.argv);
  for (const auto& [k, v] : settings) m.set(k, v);
  for (const auto& p : inputs) m.add_input(p);
  for (const auto& p : outputs) m.add_output(p);
  std::ostringstream text;
  m.write(text);
  write_file(primary.string() + ".manifest", text.str());
}

struct GraphFlags {
  std::string path;
  std::string nodes;
  bool directed = false;

  void add(CLI::App* app) {
    app->add_option("graph", path, "Edge-list file")->required();
    app->add_flag("--directed", directed, "Treat edges as arcs");
    app->add_option("--nodes", nodes, "Node manifest (one token per line; may list isolated nodes)");
  }

  std::vector<fs::path> inputs() const {
    std::vector<fs::path> in{path};
    if (!nodes.empty()) in.emplace_back(nodes);
    return in;
  }

  std::vector<std::string> manifest_tokens() const {
    if (nodes.empty()) return {};
    auto in = open_input(nodes);
    return load_node_manifest(in);
  }

  Graph load(std::ostream& err) const {
    auto in = open_input(path);
    LoadOptions options;
    options.directed = directed;
    options.manifest = manifest_tokens();
    auto loaded = load_edge_list(in, options);
    if (loaded.duplicate_edges > 0 || loaded.self_loops > 0) {
      err << "warning: dropped " << loaded.duplicate_edges << " duplicate edge(s) and " << loaded.self_loops
          << " self-loop(s)\n";
    }
    return std::move(loaded.graph);
  }
};

struct SamplerFlags {
  std::string method = "l1";
  int k = 1;
  std::size_t d = 50;
  std::size_t sketch = 0;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string fallback = "heaviest";
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* sketch_opt = nullptr;

  void add(CLI::App* app, std::size_t default_d) {
    d = default_d;
    app->add_option("--method", method, "Sampler: l0, l1, l2 or rw")->capture_default_str();
    app->add_option("--k", k, "Neighbourhood depth")->capture_default_str()->check(CLI::NonNegativeNumber);
    app->add_option("--d", d, "Number of coordinates")->capture_default_str()->check(CLI::PositiveNumber);
    sketch_opt = app->add_option("--sketch", sketch, "Counter sketch capacity (default max(10, ceil(2 log2 n)+1))")
                     ->check(CLI::PositiveNumber);
    epsilon_opt = app->add_option("--epsilon", epsilon, "L2 norm sketch accuracy (l2 only)")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--workers", workers, "Worker threads (output does not depend on it)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--fallback", fallback, "Unsampled cells: heaviest or empty")->capture_default_str();
  }

  SamplerConfig config(std::size_t node_count) const {
    SamplerConfig cfg;
    const auto m = parse_method(method);
    if (!m) throw UsageError("unknown method '" + method + "' (expected l0, l1, l2 or rw)");
    cfg.method = *m;
    if (epsilon_opt->count() > 0 && cfg.method != Method::l2) {
      throw UsageError("--epsilon only applies to --method l2");
    }
    if (sketch_opt->count() > 0 && (cfg.method == Method::l0 || cfg.method == Method::random_walk)) {
      throw UsageError("--sketch only applies to --method l1 or l2");
    }
    const auto f = parse_fallback(fallback);
    if (!f) throw UsageError("unknown fallback '" + fallback + "' (expected heaviest or empty)");
    cfg.fallback = *f;
    cfg.depth = k;
    cfg.dimensions = d;
    cfg.sketch_capacity = sketch_opt->count() > 0 ? sketch : default_sketch_capacity(node_count);
    cfg.norm_epsilon = epsilon;
    cfg.seed = seed;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

std::vector<std::pair<std::string, std::string>> config_settings(const SamplerConfig& cfg) {
  return {{"config.method", std::string(to_string(cfg.method))},
          {"config.k", std::to_string(cfg.depth)},
          {"config.d", std::to_string(cfg.dimensions)},
          {"config.sketch", std::to_string(cfg.sketch_capacity)},
          {"config.epsilon", format_double(cfg.norm_epsilon)},
          {"config.seed", std::to_string(cfg.seed)},
          {"config.attributes", cfg.attribute_mode ? "1" : "0"},
          {"config.fallback", std::string(to_string(cfg.fallback))}};
}

void guard_size(std::size_t n, bool force) {
  if (n > kOracleNodeLimit && !force) {
    throw Error("graph has " + std::to_string(n) + " nodes; exact oracles are limited to " +
                std::to_string(kOracleNodeLimit) + " (use --force to override)");
  }
}

NodeId require_node(const Graph& g, const std::string& token) {
  const auto u = g.find(token);
  if (!u) throw Error("unknown node '" + token + "'");
  return *u;
}

// --- embed -----------------------------------------------------------------

struct EmbedCommand {
  GraphFlags graph;
  SamplerFlags sampler;
  std::string attributes;
  std::string output;
  bool streaming = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("embed", "Sample a d-coordinate embedding for every node");
    graph.add(cmd);
    sampler.add(cmd, 50);
    cmd->add_option("--attributes", attributes, "Attribute file (node<TAB>attr ...); samples attributes");
    cmd->add_flag("--streaming", streaming, "Semi-streaming mode: k passes over the edge file");
    cmd->add_option("-o,--output", output, "Embedding TSV to write")->required();
  }

  void run(const Run& r) const {
    std::vector<std::string> tokens;
    std::optional<Graph> g;
    std::size_t n = 0;
    if (streaming) {
      auto in = open_input(graph.path);
      tokens = scan_edge_list_tokens(in, graph.manifest_tokens());
      n = tokens.size();
    } else {
      g = graph.load(r.err);
      n = g->node_count();
    }

    auto cfg = sampler.config(n);
    cfg.attribute_mode = !attributes.empty();

    EmbeddingResult result;
    if (streaming) {
      // Attributes are keyed by token, so an edgeless graph over the same
      // node set is enough to resolve them.
      const Graph nodes_only = Graph::from_edges(tokens, {}, graph.directed);
      std::optional<AttributeTable> attrs;
      if (cfg.attribute_mode) {
        auto in = open_input(attributes);
        attrs = load_attributes(in, nodes_only);
      }
      const auto problem = attrs ? SamplingProblem::attributes(tokens, *attrs) : SamplingProblem::nodes(tokens);
      std::unordered_map<std::string, NodeId> ids;
      for (NodeId u = 0; u < tokens.size(); ++u) ids.emplace(tokens[u], u);
      EdgeListFileStream stream(graph.path, &ids);
      result = streaming_pass_driver(stream, problem, cfg, graph.directed);
    } else {
      std::optional<AttributeTable> attrs;
      if (cfg.attribute_mode) {
        auto in = open_input(attributes);
        attrs = load_attributes(in, *g);
      }
      result = build_embedding(*g, attrs ? &*attrs : nullptr, cfg, sampler.workers);
    }

    std::ostringstream emb;
    write_embedding_tsv(emb, result.matrix);
    std::ostringstream diag;
    write_diagnostics_tsv(diag, result.diagnostics, result.matrix.row_tokens());
    const fs::path primary = output;
    const fs::path sidecar = output + ".diag.tsv";
    write_file(primary, emb.str());
    write_file(sidecar, diag.str());

    auto inputs = graph.inputs();
    if (!attributes.empty()) inputs.emplace_back(attributes);
    auto settings = config_settings(cfg);
    settings.emplace_back("config.streaming", streaming ? "1" : "0");
    settings.emplace_back("config.directed", graph.directed ? "1" : "0");
    write_manifest(r, "embed", primary, inputs, {primary, sidecar}, settings);

    std::size_t fallback = 0;
    std::size_t empty = 0;
    for (std::size_t j = 0; j < result.diagnostics.fallback.size(); ++j) {
      fallback += result.diagnostics.fallback[j];
      empty += result.diagnostics.empty[j];
    }
    r.out << "wrote " << result.matrix.rows() << " x " << result.matrix.cols() << " embedding to " << output
          << " (fallback cells " << fallback << ", empty cells " << empty << ")\n";
  }
};

// --- map -------------------------------------------------------------------

struct MapCommand {
  std::string embedding;
  std::string labels;
  std::string output;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("map", "Hash an embedding into sparse binary features (Hamming kernel map)");
    cmd->add_option("embedding", embedding, "Embedding TSV")->required();
    cmd->add_option("--epsilon", epsilon, "Collision budget; dimension D = ceil(d/epsilon)")->capture_default_str();
    cmd->add_option("--seed", seed, "Tabulation hash seed")->capture_default_str();
    cmd->add_option("--labels", labels, "Node labels (node<TAB>integer); missing nodes get 0");
    cmd->add_option("--workers", workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("-o,--output", output, "Sparse feature file to write")->required();
  }

  void run(const Run& r) const {
    auto in = open_input(embedding);
    const auto table = read_embedding_tsv(in);
    const auto& emb = table.matrix;
    std::uint64_t dimension = 0;
    try {
      dimension = map_dimension(emb.cols(), epsilon);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    std::optional<std::vector<int>> label_values;
    if (!labels.empty()) {
      std::unordered_map<std::string, std::size_t> row_of;
      for (std::size_t i = 0; i < emb.rows(); ++i) row_of.emplace(emb.row_token(i), i);
      label_values.emplace(emb.rows(), 0);
      auto lin = open_input(labels);
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(lin, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string token;
        int label = 0;
        if (!(fields >> token >> label)) throw ParseError("expected 'node label'", lineno);
        const auto it = row_of.find(token);
        if (it == row_of.end()) throw ParseError("label for unknown node '" + token + "'", lineno);
        (*label_values)[it->second] = label;
      }
    }

    const auto maps = map_embedding(emb, epsilon, TabulationHasher(seed), workers);
    std::ostringstream text;
    if (label_values) {
      export_sparse(text, maps, std::span<const int>(*label_values));
    } else {
      export_sparse(text, maps);
    }
    write_file(output, text.str());

    std::vector<fs::path> inputs{embedding};
    if (!labels.empty()) inputs.emplace_back(labels);
    write_manifest(r, "map", output, inputs, {fs::path(output)},
                   {{"map.epsilon", format_double(epsilon)},
                    {"map.seed", std::to_string(seed)},
                    {"map.d", std::to_string(emb.cols())},
                    {"map.dimension", std::to_string(dimension)}});
    r.out << "wrote " << maps.size() << " sparse rows to " << output << " (D=" << dimension << ")\n";
  }
};

// --- check -----------------------------------------------------------------

struct CheckCommand {
  GraphFlags graph;
  SamplerFlags sampler;
  std::size_t pairs = 50;
  double tolerance = 0.0;
  bool force = false;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("check", "Compare empirical sampling against exact oracles");
    graph.add(cmd);
    sampler.add(cmd, 10000);
    cmd->add_option("--pairs", pairs, "Node pairs for collision checks")->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "Override the per-method tolerance (l0 0.03, l1 0.05, l2 0.06)");
    cmd->add_flag("--force", force, "Allow graphs above the oracle size limit");
    cmd->add_option("-o,--output", output, "Write the report here instead of stdout");
  }

  void run(const Run& r) const {
    const Graph g = graph.load(r.err);
    guard_size(g.node_count(), force);
    const auto cfg = sampler.config(g.node_count());
    if (cfg.method == Method::random_walk) throw UsageError("check has no exact oracle for --method rw");
    const double tol = tolerance > 0.0 ? tolerance
                       : cfg.method == Method::l0 ? 0.03
                       : cfg.method == Method::l1 ? 0.05
                                                  : 0.06;
    const auto lp = cfg.method == Method::l0 ? oracle::Lp::l0 : cfg.method == Method::l1 ? oracle::Lp::l1 : oracle::Lp::l2;
    const std::size_t n = g.node_count();

    const auto problem = SamplingProblem::nodes(g.tokens());
    check_exact_count_range(g, problem, cfg.depth);
    std::vector<NodeId> node_of(problem.universe().size());
    for (TokenId t = 0; t < node_of.size(); ++t) node_of[t] = *g.find(problem.universe().token(t));

    // Pairs: all of them when few, otherwise a seeded sample.
    std::vector<Edge> checked;
    const std::uint64_t total = n < 2 ? 0 : std::uint64_t{n} * (n - 1) / 2;
    if (total <= pairs) {
      for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) checked.emplace_back(u, v);
      }
    } else {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
      std::set<Edge> seen;
      while (checked.size() < pairs) {
        NodeId u = pick(rng);
        NodeId v = pick(rng);
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (seen.insert({u, v}).second) checked.emplace_back(u, v);
      }
    }

    struct Tally {
      std::vector<std::unordered_map<NodeId, std::size_t>> hits;
      std::vector<std::size_t> sampled;
      std::vector<std::size_t> both;
      std::vector<std::size_t> equal;
    };
    const unsigned workers = std::max(1u, sampler.workers);
    std::vector<Tally> tallies(workers);
    auto work = [&](unsigned w) {
      Tally& t = tallies[w];
      t.hits.resize(n);
      t.sampled.assign(n, 0);
      t.both.assign(checked.size(), 0);
      t.equal.assign(checked.size(), 0);
      for (std::size_t j = w; j < cfg.dimensions; j += workers) {
        const auto s = sample_coordinate(g, problem, cfg, j);
        for (NodeId u = 0; u < n; ++u) {
          if (s.status[u] != CellStatus::sampled) continue;
          ++t.sampled[u];
          ++t.hits[u][node_of[s.token[u]]];
        }
        for (std::size_t p = 0; p < checked.size(); ++p) {
          const auto [u, v] = checked[p];
          if (s.status[u] != CellStatus::sampled || s.status[v] != CellStatus::sampled) continue;
          ++t.both[p];
          if (s.token[u] == s.token[v]) ++t.equal[p];
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
      work(0);
    }
    Tally total_tally = std::move(tallies[0]);
    for (unsigned w = 1; w < workers; ++w) {
      for (NodeId u = 0; u < n; ++u) {
        total_tally.sampled[u] += tallies[w].sampled[u];
        for (const auto& [x, c] : tallies[w].hits[u]) total_tally.hits[u][x] += c;
      }
      for (std::size_t p = 0; p < checked.size(); ++p) {
        total_tally.both[p] += tallies[w].both[p];
        total_tally.equal[p] += tallies[w].equal[p];
      }
    }

    std::ostringstream report;
    report << std::setprecision(6);
    report << "#check method=" << to_string(cfg.method) << " k=" << cfg.depth << " coordinates=" << cfg.dimensions
           << " sketch=" << cfg.sketch_capacity << " seed=" << cfg.seed << " tolerance=" << tol << '\n';
    report << "kind\tsubject\tmeasured\texpected\tdeviation\tresult\n";
    std::size_t failures = 0;
    std::size_t checks = 0;
    for (NodeId u = 0; u < n; ++u) {
      const auto exact = oracle::exact_sampling_distribution(g, u, cfg.depth, lp);
      double tv = 1.0;
      if (total_tally.sampled[u] > 0) {
        const double m = static_cast<double>(total_tally.sampled[u]);
        tv = 0.0;
        for (const auto& [x, p] : exact) {
          const auto it = total_tally.hits[u].find(x);
          const double emp = it == total_tally.hits[u].end() ? 0.0 : static_cast<double>(it->second) / m;
          tv += std::abs(emp - p);
        }
        for (const auto& [x, c] : total_tally.hits[u]) {
          if (!exact.contains(x)) tv += static_cast<double>(c) / m;
        }
        tv *= 0.5;
      }
      const bool ok = tv <= tol;
      ++checks;
      failures += ok ? 0 : 1;
      report << "distribution_tv\t" << g.token(u) << '\t' << tv << "\t0\t" << tv << '\t' << (ok ? "pass" : "fail")
             << '\n';
    }
    for (std::size_t p = 0; p < checked.size(); ++p) {
      const auto [u, v] = checked[p];
      const double expected = cfg.method == Method::l0   ? oracle::jaccard(g, u, v, cfg.depth)
                              : cfg.method == Method::l1 ? oracle::minsum_similarity(g, u, v, cfg.depth, 1)
                                                         : oracle::minsum_similarity(g, u, v, cfg.depth, 2);
      const double measured = total_tally.both[p] == 0 ? 0.0
                                                       : static_cast<double>(total_tally.equal[p]) /
                                                             static_cast<double>(total_tally.both[p]);
      const double dev = std::abs(measured - expected);
      const bool ok = total_tally.both[p] > 0 && dev <= tol;
      ++checks;
      failures += ok ? 0 : 1;
      report << "collision\t" << g.token(u) << ',' << g.token(v) << '\t' << measured << '\t' << expected << '\t' << dev
             << '\t' << (ok ? "pass" : "fail") << '\n';
    }
    report << "summary\t" << (checks - failures) << '/' << checks << " passed\t\t\t\t"
           << (failures == 0 ? "pass" : "fail") << '\n';

    if (output.empty()) {
      r.out << report.str();
    } else {
      write_file(output, report.str());
      write_manifest(r, "check", output, graph.inputs(), {fs::path(output)}, config_settings(cfg));
      r.out << (checks - failures) << '/' << checks << " checks passed; report in " << output << '\n';
    }
    if (failures > 0) throw CheckFailed(std::to_string(failures) + " check(s) outside tolerance");
  }
};

// --- oracle ----------------------------------------------------------------

struct OracleCommand {
  GraphFlags graph;
  int k = 1;
  std::string method = "l1";
  std::string node;
  std::vector<std::string> pair;
  bool force = false;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("oracle", "Print exact k-hop frequencies, sampling laws and similarities");
    graph.add(cmd);
    cmd->add_option("--k", k, "Neighbourhood depth")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd->add_option("--method", method, "Sampling law for --node: l0, l1 or l2")->capture_default_str();
    cmd->add_option("--node", node, "Print f^k and the sampling law of this node");
    cmd->add_option("--pair", pair, "Print similarities between two nodes")->expected(2);
    cmd->add_flag("--force", force, "Allow graphs above the oracle size limit");
    cmd->add_option("-o,--output", output, "Write the report here instead of stdout");
  }

  void run(const Run& r) const {
    const Graph g = graph.load(r.err);
    guard_size(g.node_count(), force);
    const auto m = parse_method(method);
    if (!m || *m == Method::random_walk) throw UsageError("oracle --method must be l0, l1 or l2");
    check_exact_count_range(g, SamplingProblem::nodes(g.tokens()), k);

    std::ostringstream text;
    text << std::setprecision(17);
    if (!node.empty()) {
      const NodeId u = require_node(g, node);
      const auto lp = *m == Method::l0 ? oracle::Lp::l0 : *m == Method::l1 ? oracle::Lp::l1 : oracle::Lp::l2;
      const auto f = oracle::khop_frequency(g, u, k);
      const auto law = oracle::exact_sampling_distribution(g, u, k, lp);
      text << "#oracle node=" << node << " k=" << k << " method=" << method << " l1=" << f.l1() << " l2=" << f.l2()
           << '\n';
      text << "token\tfrequency\tprobability\n";
      for (const NodeId x : f.support()) {
        const auto it = law.find(x);
        text << g.token(x) << '\t' << f[x] << '\t' << (it == law.end() ? 0.0 : it->second) << '\n';
      }
    }
    if (!pair.empty()) {
      const NodeId u = require_node(g, pair[0]);
      const NodeId v = require_node(g, pair[1]);
      const auto cos = oracle::cosine_and_sqrtcos(g, u, v, k);
      text << "#oracle pair=" << pair[0] << ',' << pair[1] << " k=" << k << '\n';
      text << "similarity\tvalue\n";
      text << "jaccard\t" << oracle::jaccard(g, u, v, k) << '\n';
      text << "minsum_l1\t" << oracle::minsum_similarity(g, u, v, k, 1) << '\n';
      text << "minsum_l2\t" << oracle::minsum_similarity(g, u, v, k, 2) << '\n';
      text << "cosine\t" << cos.cosine << '\n';
      text << "sqrt_cosine\t" << cos.sqrt_cosine << '\n';
    }
    if (node.empty() && pair.empty()) {
      text << "#oracle k=" << k << '\n';
      text << "node\tsupport\tl1\tl2\n";
      for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto f = oracle::khop_frequency(g, u, k);
        text << g.token(u) << '\t' << f.support().size() << '\t' << f.l1() << '\t' << f.l2() << '\n';
      }
    }
    if (output.empty()) {
      r.out << text.str();
    } else {
      write_file(output, text.str());
      write_manifest(r, "oracle", output, graph.inputs(), {fs::path(output)}, {{"oracle.k", std::to_string(k)}});
    }
  }
};

// --- linkpred --------------------------------------------------------------

struct LinkPredCommand {
  GraphFlags graph;
  SamplerFlags sampler;
  double holdout = 0.2;
  double pair_fraction = 0.05;
  std::size_t top = 1000;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("linkpred", "Hold out edges, embed the rest, rank pairs by overlap");
    graph.add(cmd);
    sampler.add(cmd, 50);
    cmd->add_option("--holdout", holdout, "Fraction of edges to hold out")->capture_default_str();
    cmd->add_option("--pair-fraction", pair_fraction, "Fraction of node pairs sampled as candidates")
        ->capture_default_str();
    cmd->add_option("--top", top, "Ranking cutoff K")->capture_default_str();
    cmd->add_option("-o,--output", output, "Write the metrics here instead of stdout");
  }

  void run(const Run& r) const {
    if (graph.directed) throw UsageError("linkpred works on undirected graphs");
    const Graph g = graph.load(r.err);
    const auto cfg = sampler.config(g.node_count());
    LinkPredTask task;
    try {
      task = make_linkpred_task(g, holdout, pair_fraction, top, cfg.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto emb = build_embedding(task.residual, nullptr, cfg, sampler.workers);
    const auto metrics = precision_recall_at_k(task, emb.matrix);

    std::ostringstream text;
    text << std::setprecision(17);
    text << "#linkpred method=" << to_string(cfg.method) << " k=" << cfg.depth << " d=" << cfg.dimensions
         << " sketch=" << cfg.sketch_capacity << " epsilon=" << format_double(cfg.norm_epsilon)
         << " seed=" << cfg.seed << " holdout=" << format_double(holdout)
         << " pair_fraction=" << format_double(pair_fraction) << " K=" << task.k << '\n';
    text << "metric\tvalue\n";
    text << "held_out\t" << task.held_out.size() << '\n';
    text << "candidates\t" << task.candidates.size() << '\n';
    text << "K\t" << task.k << '\n';
    text << "hits\t" << metrics.hits << '\n';
    text << "precision\t" << metrics.precision << '\n';
    text << "recall\t" << metrics.recall << '\n';
    text << "random_baseline\t" << task.random_baseline() << '\n';

    if (output.empty()) {
      r.out << text.str();
    } else {
      write_file(output, text.str());
      auto settings = config_settings(cfg);
      settings.emplace_back("linkpred.holdout", format_double(holdout));
      settings.emplace_back("linkpred.pair_fraction", format_double(pair_fraction));
      settings.emplace_back("linkpred.K", std::to_string(top));
      write_manifest(r, "linkpred", output, graph.inputs(), {fs::path(output)}, settings);
    }
  }
};

// --- overlap ---------------------------------------------------------------

struct OverlapCommand {
  std::string embedding;
  std::size_t pairs = 1000;
  std::uint64_t seed = 0;
  bool per_pair = false;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("overlap", "Average Hamming overlap between random node pairs");
    cmd->add_option("embedding", embedding, "Embedding TSV")->required();
    cmd->add_option("--pairs", pairs, "Number of node pairs")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Pair sampling seed")->capture_default_str();
    cmd->add_flag("--per-pair", per_pair, "Also list every sampled pair");
    cmd->add_option("-o,--output", output, "Write the report here instead of stdout");
  }

  void run(const Run& r) const {
    auto in = open_input(embedding);
    const auto table = read_embedding_tsv(in);
    OverlapReport rep;
    try {
      rep = average_overlap(table.matrix, pairs, seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::ostringstream text;
    text << std::setprecision(17);
    text << "#overlap pairs=" << pairs << " seed=" << seed << " d=" << table.matrix.cols() << '\n';
    text << "statistic\tvalue\n";
    text << "mean\t" << rep.mean << '\n';
    text << "median\t" << rep.median << '\n';
    if (per_pair) {
      text << "#u\tv\toverlap\n";
      for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
        text << table.matrix.row_token(rep.pairs[i].first) << '\t' << table.matrix.row_token(rep.pairs[i].second)
             << '\t' << rep.overlaps[i] << '\n';
      }
    }
    if (output.empty()) {
      r.out << text.str();
    } else {
      write_file(output, text.str());
      write_manifest(r, "overlap", output, {fs::path(embedding)}, {fs::path(output)},
                     {{"overlap.pairs", std::to_string(pairs)}, {"overlap.seed", std::to_string(seed)}});
    }
  }
};

// --- replay ----------------------------------------------------------------

struct ReplayCommand {
  std::string manifest;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("replay", "Re-run a recorded command and verify its outputs byte-for-byte");
    cmd->add_option("manifest", manifest, "Run manifest (<output>.manifest)")->required();
    cmd->add_option("-o,--output", output, "Write the replayed primary output here (default: original path)");
  }

  int run(const Run& r) const {
    auto in = open_input(manifest);
    const auto m = RunManifest::read(in);
    if (m.get("tool") != "lone") throw Error(manifest + " is not a lone run manifest");
    if (const auto v = m.get("version"); v != LONE_VERSION) {
      r.err << "warning: manifest written by version " << v.value_or("?") << ", running " << LONE_VERSION << '\n';
    }
    for (const auto& [path, digest] : m.files("input")) {
      if (file_sha256(path) != digest) throw Error("input " + path + " changed since the recorded run");
    }

    auto argv = m.argv();
    if (argv.empty() || argv.front() == "replay") throw Error("manifest records no replayable command");
    const auto outputs = m.files("output");
    if (outputs.empty()) throw Error("manifest records no outputs");
    const std::string old_primary = outputs.front().first;
    std::string new_primary = old_primary;
    if (!output.empty()) {
      new_primary = output;
      bool replaced = false;
      for (std::size_t i = 0; i < argv.size(); ++i) {
        if ((argv[i] == "-o" || argv[i] == "--output") && i + 1 < argv.size()) {
          argv[i + 1] = output;
          replaced = true;
        } else if (argv[i].starts_with("--output=")) {
          argv[i] = "--output=" + output;
          replaced = true;
        }
      }
      if (!replaced) throw Error("recorded command has no output flag to redirect");
    }

    std::ostringstream quiet;
    const int code = run_cli(argv, quiet, r.err);
    if (code != kSuccess && code != kCheckFailed) return code;

    bool all_match = true;
    for (const auto& [path, digest] : outputs) {
      std::string replayed = path;
      if (path.starts_with(old_primary)) replayed = new_primary + path.substr(old_primary.size());
      const bool match = fs::exists(replayed) && file_sha256(replayed) == digest;
      all_match = all_match && match;
      r.out << (match ? "match\t" : "MISMATCH\t") << replayed << '\n';
    }
    return all_match ? kSuccess : kCheckFailed;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coordinated k-hop neighbourhood sampling for node embeddings", "lone"};
  app.set_version_flag("--version", LONE_VERSION);
  app.require_subcommand(1);

  EmbedCommand embed;
  MapCommand map;
  CheckCommand check;
  OracleCommand oracle_cmd;
  LinkPredCommand linkpred;
  OverlapCommand overlap;
  ReplayCommand replay;
  embed.add(app);
  map.add(app);
  check.add(app);
  oracle_cmd.add(app);
  linkpred.add(app);
  overlap.add(app);
  replay.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  const Run run{args, out, err};
  try {
    if (app.got_subcommand("embed")) embed.run(run);
    if (app.got_subcommand("map")) map.run(run);
    if (app.got_subcommand("check")) check.run(run);
    if (app.got_subcommand("oracle")) oracle_cmd.run(run);
    if (app.got_subcommand("linkpred")) linkpred.run(run);
    if (app.got_subcommand("overlap")) overlap.run(run);
    if (app.got_subcommand("replay")) return replay.run(run);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

}  // namespace lone::cli
