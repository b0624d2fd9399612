// On-disk snapshot of API responses, and the recorder that writes one.
//
// Layout: <dir>/manifest.json plus one body file per recorded target. The
// file name is the percent-encoded path, a "__<fnv1a64 of query>" suffix when
// the target has a query string, and ".json" regardless of content type.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dracor_mcp/dracor_client.hpp"

namespace dracor_mcp::api {

// Keeps A-Z a-z 0-9 - . _ ~ and escapes every other byte as %XX.
std::string percent_encode(std::string_view text);
std::uint64_t fnv1a64(std::string_view data);
std::string fixture_key(std::string_view target);
std::string sha256_hex(std::string_view data);

struct ManifestEntry {
  std::string target;
  std::string file;
  int status = 200;
  std::string content_type;
  std::string recorded_at;
  std::uint64_t bytes = 0;
  std::string sha256;
  std::string error;  // set when the recorder failed to fetch the target
};

struct Manifest {
  int format_version = 1;
  std::string base_url;
  std::string recorded_at;
  std::string note;
  std::vector<ManifestEntry> entries;
};

json to_json(const ManifestEntry& e);
json to_json(const Manifest& m);
Manifest parse_manifest(const json& j);

class FixtureBackend : public Backend {
 public:
  // A missing or unreadable manifest is not fatal here; every get() then
  // fails with a transport error, so an empty snapshot never looks like an
  // empty corpus.
  explicit FixtureBackend(std::filesystem::path dir);

  Response get(const Request& request) const override;
  std::string describe() const override;

  const std::filesystem::path& dir() const noexcept { return dir_; }
  bool loaded() const noexcept { return load_error_.empty(); }
  const Manifest& manifest() const noexcept { return manifest_; }

 private:
  std::filesystem::path dir_;
  Manifest manifest_;
  std::map<std::string, std::size_t, std::less<>> by_target_;
  std::string load_error_;
};

// One entry per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> parse_request_plan(std::string_view text);

// Accept header the client sends for `target`.
std::string accept_for(std::string_view target);

struct RecordResult {
  Manifest manifest;
  std::size_t failures = 0;
};

// Fetches every planned target through `backend` and writes body files plus
// manifest.json into `out_dir`. Failed targets are listed in the manifest with
// their error and produce no body file.
RecordResult record_fixtures(const Backend& backend, std::string_view base_url, const std::vector<std::string>& plan,
                             const std::filesystem::path& out_dir, std::string_view recorded_at);

}  // namespace dracor_mcp::api
