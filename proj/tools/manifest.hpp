#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lone::cli {

/// Flat `key=value` record of one run: tool version, argv, config, and
/// SHA-256 digests of inputs and outputs. Keys keep insertion order so the
/// file itself is reproducible.
class RunManifest {
 public:
  void set(std::string key, std::string value);
  std::optional<std::string> get(std::string_view key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

  void add_argv(const std::vector<std::string>& argv);
  std::vector<std::string> argv() const;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  /// (path, digest) pairs under `input.N.` / `output.N.`.
  std::vector<std::pair<std::string, std::string>> files(std::string_view kind) const;

  void write(std::ostream& out) const;
  static RunManifest read(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Lowercase hex SHA-256 of a file's bytes. Throws lone::Error if unreadable.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace lone::cli
