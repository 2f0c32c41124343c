#include "lone/embedding_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <vector>

#include "lone/error.hpp"

namespace lone {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& value) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_embedding_tsv(std::ostream& out, const EmbeddingMatrix& matrix) {
  const auto& cfg = matrix.config();
  out << "#method=" << to_string(cfg.method) << "\tk=" << cfg.depth << "\td=" << cfg.dimensions
      << "\tsketch=" << cfg.sketch_capacity << "\tepsilon=" << format_double(cfg.norm_epsilon)
      << "\tseed=" << cfg.seed << "\tattributes=" << (cfg.attribute_mode ? 1 : 0)
      << "\tfallback=" << to_string(cfg.fallback) << '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out << matrix.row_token(r);
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      const TokenId t = matrix.token(r, c);
      out << '\t';
      if (t == kNoToken) {
        out << kEmptyCell;
      } else {
        out << matrix.universe().token(t);
      }
    }
    out << '\n';
  }
}

void write_diagnostics_tsv(std::ostream& out, const CoordinateDiagnostics& diag,
                           std::span<const std::string> node_tokens) {
  out << "#coordinate\tsampled\tfallback\tempty\n";
  for (std::size_t j = 0; j < diag.sampled.size(); ++j) {
    out << j << '\t' << diag.sampled[j] << '\t' << diag.fallback[j] << '\t' << diag.empty[j] << '\n';
  }
  out << "#node\tmean_threshold\n";
  for (std::size_t u = 0; u < diag.node_threshold.size(); ++u) {
    out << node_tokens[u] << '\t' << format_double(diag.node_threshold[u]) << '\n';
  }
}

EmbeddingTable read_embedding_tsv(std::istream& in) {
  EmbeddingTable table;
  std::vector<std::string> rows;
  std::vector<std::vector<std::string>> cells;
  std::set<std::string, std::less<>> distinct;
  std::string line;
  std::size_t lineno = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!rows.empty()) continue;
      for (const auto field : split_tabs(std::string_view(line).substr(1))) {
        const auto eq = field.find('=');
        if (eq != std::string_view::npos) table.header.emplace(field.substr(0, eq), field.substr(eq + 1));
      }
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() < 2) throw ParseError("embedding row needs a node token and at least one cell", lineno);
    if (rows.empty()) {
      cols = fields.size() - 1;
    } else if (fields.size() - 1 != cols) {
      throw ParseError("embedding row has " + std::to_string(fields.size() - 1) + " cells, expected " +
                           std::to_string(cols),
                       lineno);
    }
    rows.emplace_back(fields[0]);
    auto& row = cells.emplace_back();
    for (std::size_t c = 1; c < fields.size(); ++c) {
      row.emplace_back(fields[c]);
      if (fields[c] != kEmptyCell) distinct.emplace(fields[c]);
    }
  }
  if (rows.empty()) throw ParseError("embedding file has no rows", 0);

  SamplerConfig cfg;
  cfg.dimensions = cols;
  if (const auto it = table.header.find("method"); it != table.header.end()) {
    if (const auto m = parse_method(it->second)) cfg.method = *m;
  }
  if (const auto it = table.header.find("k"); it != table.header.end()) parse_number(it->second, cfg.depth);
  if (const auto it = table.header.find("sketch"); it != table.header.end()) {
    parse_number(it->second, cfg.sketch_capacity);
  }
  if (const auto it = table.header.find("epsilon"); it != table.header.end()) {
    parse_number(it->second, cfg.norm_epsilon);
  }
  if (const auto it = table.header.find("seed"); it != table.header.end()) parse_number(it->second, cfg.seed);
  if (const auto it = table.header.find("attributes"); it != table.header.end()) {
    cfg.attribute_mode = it->second == "1";
  }
  if (const auto it = table.header.find("fallback"); it != table.header.end()) {
    if (const auto f = parse_fallback(it->second)) cfg.fallback = *f;
  }

  auto universe = std::make_shared<const TokenUniverse>(std::vector<std::string>(distinct.begin(), distinct.end()));
  EmbeddingMatrix matrix(std::move(rows), cols, universe, cfg);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (cells[r][c] == kEmptyCell) continue;
      matrix.set(r, c, *universe->find(cells[r][c]), CellStatus::sampled);
    }
  }
  table.matrix = std::move(matrix);
  return table;
}

}  // namespace lone
