#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "lone/embedding_io.hpp"
#include "lone/error.hpp"

namespace lone {
namespace {

TEST(EmbeddingIo, HeaderAndRows) {
  const auto g = testing::path3();
  SamplerConfig cfg;
  cfg.method = Method::l0;
  cfg.depth = 2;
  cfg.dimensions = 4;
  cfg.seed = 7;
  const auto result = build_embedding(g, nullptr, cfg);
  std::ostringstream out;
  write_embedding_tsv(out, result.matrix);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "#method=l0\tk=2\td=4\tsketch=10\tepsilon=0.1\tseed=7\tattributes=0\tfallback=heaviest");
  std::string row;
  std::getline(lines, row);
  EXPECT_EQ(row.substr(0, 2), "a\t");
  EXPECT_EQ(std::count(row.begin(), row.end(), '\t'), 4);
}

TEST(EmbeddingIo, RoundTripKeepsTokensAndEmptyCells) {
  const auto g = testing::gnp(30, 0.1, 6);
  SamplerConfig cfg;
  cfg.method = Method::l1;
  cfg.depth = 2;
  cfg.dimensions = 20;
  cfg.sketch_capacity = 2;
  cfg.fallback = FallbackPolicy::empty;
  const auto result = build_embedding(g, nullptr, cfg);
  std::ostringstream out;
  write_embedding_tsv(out, result.matrix);
  EXPECT_NE(out.str().find(kEmptyCell), std::string::npos);
  std::istringstream in(out.str());
  const auto table = read_embedding_tsv(in);
  const auto& back = table.matrix;
  EXPECT_EQ(table.header.at("method"), "l1");
  EXPECT_EQ(back.config(), cfg);
  ASSERT_EQ(back.rows(), result.matrix.rows());
  ASSERT_EQ(back.cols(), result.matrix.cols());
  for (std::size_t r = 0; r < back.rows(); ++r) {
    EXPECT_EQ(back.row_token(r), result.matrix.row_token(r));
    for (std::size_t c = 0; c < back.cols(); ++c) {
      const auto t = result.matrix.token(r, c);
      if (t == kNoToken) {
        EXPECT_EQ(back.token(r, c), kNoToken);
        EXPECT_EQ(back.status(r, c), CellStatus::empty);
      } else {
        EXPECT_EQ(back.universe().token(back.token(r, c)), result.matrix.universe().token(t));
      }
    }
  }
  std::ostringstream again;
  write_embedding_tsv(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(EmbeddingIo, RaggedRowsAreRejected) {
  std::istringstream in("#method=l0\na\tx\ty\nb\tx\n");
  try {
    read_embedding_tsv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream empty("#method=l0\n");
  EXPECT_THROW(read_embedding_tsv(empty), ParseError);
}

TEST(EmbeddingIo, DiagnosticsSidecar) {
  CoordinateDiagnostics diag{{2, 1}, {0, 1}, {1, 1}, {7.0, 0.5}};
  const std::vector<std::string> nodes{"a", "b"};
  std::ostringstream out;
  write_diagnostics_tsv(out, diag, nodes);
  EXPECT_EQ(out.str(),
            "#coordinate\tsampled\tfallback\tempty\n0\t2\t0\t1\n1\t1\t1\t1\n#node\tmean_threshold\na\t7\nb\t0.5\n");
}

TEST(EmbeddingIo, FormatDoubleRoundTrips) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.01), "0.01");
  EXPECT_EQ(format_double(3.0), "3");
}

}  // namespace
}  // namespace lone
