#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include "lone/error.hpp"

namespace lone::cli {

void RunManifest::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> RunManifest::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void RunManifest::add_argv(const std::vector<std::string>& argv) {
  set("argc", std::to_string(argv.size()));
  for (std::size_t i = 0; i < argv.size(); ++i) set("argv." + std::to_string(i), argv[i]);
}

std::vector<std::string> RunManifest::argv() const {
  const auto argc = get("argc");
  if (!argc) throw Error("manifest has no argc entry");
  const std::size_t n = std::stoul(*argc);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto arg = get("argv." + std::to_string(i));
    if (!arg) throw Error("manifest is missing argv." + std::to_string(i));
    out.push_back(std::move(*arg));
  }
  return out;
}

namespace {

std::size_t count_prefix(const std::vector<std::pair<std::string, std::string>>& entries, const std::string& prefix) {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const auto& e) {
    return e.first.starts_with(prefix) && e.first.ends_with(".path");
  }));
}

}  // namespace

void RunManifest::add_input(const std::filesystem::path& path) {
  const std::string base = "input." + std::to_string(count_prefix(entries_, "input.")) + ".";
  set(base + "path", path.string());
  set(base + "sha256", file_sha256(path));
}

void RunManifest::add_output(const std::filesystem::path& path) {
  const std::string base = "output." + std::to_string(count_prefix(entries_, "output.")) + ".";
  set(base + "path", path.string());
  set(base + "sha256", file_sha256(path));
}

std::vector<std::pair<std::string, std::string>> RunManifest::files(std::string_view kind) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0;; ++i) {
    const std::string base = std::string(kind) + "." + std::to_string(i) + ".";
    auto path = get(base + "path");
    auto digest = get(base + "sha256");
    if (!path || !digest) break;
    out.emplace_back(std::move(*path), std::move(*digest));
  }
  return out;
}

void RunManifest::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
}

RunManifest RunManifest::read(std::istream& in) {
  RunManifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value", lineno);
    m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 unavailable");
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

}  // namespace lone::cli
