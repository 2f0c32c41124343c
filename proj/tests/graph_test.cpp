#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lone/error.hpp"
#include "lone/graph.hpp"

namespace lone {
namespace {

EdgeListLoad load(const std::string& text, LoadOptions options = {}) {
  std::istringstream in(text);
  return load_edge_list(in, options);
}

std::set<std::pair<std::string, std::string>> token_edges(const Graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [u, v] : g.edges()) {
    auto a = g.token(u);
    auto b = g.token(v);
    if (!g.directed() && b < a) std::swap(a, b);
    out.emplace(a, b);
  }
  return out;
}

TEST(EdgeList, ParsesCommentsAndInternsInOrder) {
  const auto r = load("# header\nb a\n\na c 0.5\n");
  const auto& g = r.graph;
  ASSERT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.token(0), "b");
  EXPECT_EQ(g.token(1), "a");
  EXPECT_EQ(g.token(2), "c");
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(*g.find("c"), 2u);
  EXPECT_FALSE(g.find("zz").has_value());
}

TEST(EdgeList, DropsDuplicatesAndSelfLoops) {
  const auto r = load("a b\nb a\na b\nc c\nb c\n");
  EXPECT_EQ(r.graph.edge_count(), 2u);
  EXPECT_EQ(r.duplicate_edges, 2u);
  EXPECT_EQ(r.self_loops, 1u);
  for (NodeId u = 0; u < r.graph.node_count(); ++u) {
    const auto nb = r.graph.neighbors(u);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_EQ(std::find(nb.begin(), nb.end(), u), nb.end());
  }
}

TEST(EdgeList, SelfLoopOnlyTokenIsNotANode) {
  const auto r = load("a b\nz z\n");
  EXPECT_EQ(r.graph.node_count(), 2u);
  EXPECT_FALSE(r.graph.find("z"));
}

TEST(EdgeList, ManifestAddsIsolatedNodes) {
  LoadOptions opts;
  opts.manifest = {"lonely", "a"};
  const auto r = load("a b\n", opts);
  ASSERT_EQ(r.graph.node_count(), 3u);
  EXPECT_EQ(r.graph.token(0), "lonely");
  EXPECT_EQ(r.graph.degree(0), 0u);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  try {
    load("a b\n\nsolo\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(EdgeList, EmptyInputIsAnError) { EXPECT_THROW(load("# nothing\n\n"), ParseError); }

TEST(EdgeList, DirectedKeepsArcs) {
  LoadOptions opts;
  opts.directed = true;
  const auto r = load("a b\nb a\nb c\n", opts);
  EXPECT_TRUE(r.graph.directed());
  EXPECT_EQ(r.graph.edge_count(), 3u);
  EXPECT_EQ(r.duplicate_edges, 0u);
  EXPECT_EQ(r.graph.degree(*r.graph.find("c")), 0u);
}

TEST(EdgeList, PermutedLinesGiveTheSameGraph) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::random_connected(15, 10, rng());
    std::vector<std::string> lines;
    for (const auto& [u, v] : g.edges()) lines.push_back(g.token(u) + " " + g.token(v));
    lines.push_back(lines.front());  // a duplicate
    std::string original;
    for (const auto& l : lines) original += l + "\n";
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string permuted;
    for (const auto& l : lines) {
      // Also flip endpoint order on some lines.
      if (rng() % 2) {
        const auto sp = l.find(' ');
        permuted += l.substr(sp + 1) + " " + l.substr(0, sp) + "\n";
      } else {
        permuted += l + "\n";
      }
    }
    const auto a = load(original).graph;
    const auto b = load(permuted).graph;
    EXPECT_EQ(a, b);
    EXPECT_EQ(token_edges(a), token_edges(b));
    EXPECT_EQ(a, g);
  }
}

TEST(GraphEquality, DetectsDifferentStructure) {
  const auto a = testing::graph_from(3, {{0, 1}, {1, 2}});
  const auto b = testing::graph_from(3, {{0, 1}, {0, 2}});
  EXPECT_FALSE(a == b);
}

TEST(Attributes, LoadsPerNodeLists) {
  const auto g = testing::path3();
  std::istringstream in("a\tred blue red\nc\tgreen\n");
  const auto attrs = load_attributes(in, g);
  EXPECT_EQ(attrs.node_count(), 3u);
  EXPECT_EQ(attrs.attributes(0).size(), 2u);  // deduplicated
  EXPECT_TRUE(attrs.attributes(1).empty());
  EXPECT_EQ(attrs.token(attrs.attributes(2)[0]), "green");
}

TEST(Attributes, RejectsUnknownAndRepeatedNodes) {
  const auto g = testing::path3();
  std::istringstream unknown("zz\tred\n");
  EXPECT_THROW(load_attributes(unknown, g), ParseError);
  std::istringstream repeated("a\tred\na\tblue\n");
  EXPECT_THROW(load_attributes(repeated, g), ParseError);
}

TEST(KHop, NeighbourhoodOnPath) {
  const auto g = testing::graph_from(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  EXPECT_EQ(khop_neighborhood_set(g, 0, 0), std::vector<NodeId>{0});
  EXPECT_EQ(khop_neighborhood_set(g, 2, 1), (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(khop_neighborhood_set(g, 0, 3), (std::vector<NodeId>{0, 1, 2, 3}));
  EXPECT_EQ(khop_neighborhood_set(g, 0, 10).size(), 5u);
}

TEST(Connectivity, Basic) {
  EXPECT_TRUE(is_connected(testing::cycle(6)));
  EXPECT_FALSE(is_connected(testing::graph_from(4, {{0, 1}, {2, 3}})));
}

TEST(MemoryEdgeStream, EveryPassYieldsTheSameMultiset) {
  const auto g = testing::gnp(40, 0.2, 1);
  MemoryEdgeStream stream(g.edges(), 99);
  std::vector<std::vector<Edge>> passes;
  for (int p = 0; p < 3; ++p) {
    auto& seen = passes.emplace_back();
    stream.replay([&](NodeId u, NodeId v) { seen.emplace_back(u, v); });
  }
  EXPECT_EQ(stream.passes(), 3u);
  EXPECT_NE(passes[0], passes[1]);
  for (auto& p : passes) std::sort(p.begin(), p.end());
  EXPECT_EQ(passes[0], passes[1]);
  EXPECT_EQ(passes[1], passes[2]);
}

TEST(ScanTokens, MatchesLoaderInterning) {
  const std::string text = "x y\ny z\n# c\nq q\nz w\n";
  std::istringstream in(text);
  const auto tokens = scan_edge_list_tokens(in, {"m"});
  LoadOptions opts;
  opts.manifest = {"m"};
  const auto g = load(text, opts).graph;
  ASSERT_EQ(tokens.size(), g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) EXPECT_EQ(tokens[u], g.token(u));
}

TEST(Gnp, EdgeCountNearExpectation) {
  const std::size_t n = 400;
  const double p = 0.05;
  const auto g = testing::gnp(n, p, 17);
  const double expected = p * n * (n - 1) / 2;
  EXPECT_NEAR(static_cast<double>(g.edge_count()), expected, 4 * std::sqrt(expected));
}

}  // namespace
}  // namespace lone
