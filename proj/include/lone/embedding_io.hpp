#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "lone/sampler.hpp"

namespace lone {

/// Marker written for empty-status cells.
inline constexpr std::string_view kEmptyCell = "\xE2\x88\x85";  // U+2205

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Header `#method=..\tk=..\td=..\tsketch=..\tepsilon=..\tseed=..\t...`, then
/// one row per node: token followed by d cells.
void write_embedding_tsv(std::ostream& out, const EmbeddingMatrix& matrix);

/// Per-coordinate status counts, then per-node mean thresholds.
void write_diagnostics_tsv(std::ostream& out, const CoordinateDiagnostics& diag,
                           std::span<const std::string> node_tokens);

struct EmbeddingTable {
  std::map<std::string, std::string, std::less<>> header;
  /// Universe = distinct cell tokens; statuses are sampled or empty (the
  /// fallback flag lives in the diagnostics sidecar).
  EmbeddingMatrix matrix;
};

EmbeddingTable read_embedding_tsv(std::istream& in);

}  // namespace lone
