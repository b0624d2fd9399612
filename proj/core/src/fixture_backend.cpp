#include "dracor_mcp/fixture_backend.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace dracor_mcp::api {

namespace fs = std::filesystem;

namespace {

bool is_unreserved(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.' ||
         c == '_' || c == '~';
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw std::runtime_error(where + " lacks \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw std::runtime_error(where + " has a malformed \"" + key + "\"");
  }
}

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (is_unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string fixture_key(std::string_view target) {
  bool absolute = false;
  for (std::string_view scheme : {"https://", "http://"}) {
    if (target.substr(0, scheme.size()) == scheme) {
      target.remove_prefix(scheme.size());
      absolute = true;
      break;
    }
  }
  std::string t(target);
  if (!absolute && (t.empty() || t.front() != '/')) t.insert(t.begin(), '/');
  std::string path = t;
  std::string query;
  if (auto q = t.find('?'); q != std::string::npos) {
    path = t.substr(0, q);
    query = t.substr(q + 1);
  }
  std::string key = percent_encode(path);
  if (!query.empty()) {
    char suffix[24];
    std::snprintf(suffix, sizeof suffix, "__%016llx", static_cast<unsigned long long>(fnv1a64(query)));
    key += suffix;
  }
  return key + ".json";
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

json to_json(const ManifestEntry& e) {
  json out = {{"target", e.target},         {"file", e.file},   {"status", e.status},
              {"content_type", e.content_type}, {"recorded_at", e.recorded_at}, {"bytes", e.bytes},
              {"sha256", e.sha256}};
  if (!e.error.empty()) out["error"] = e.error;
  return out;
}

json to_json(const Manifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) entries.push_back(to_json(e));
  return {{"format_version", m.format_version},
          {"base_url", m.base_url},
          {"recorded_at", m.recorded_at},
          {"note", m.note},
          {"entries", entries}};
}

Manifest parse_manifest(const json& j) {
  if (!j.is_object()) throw std::runtime_error("manifest is not a JSON object");
  Manifest m;
  m.format_version = field<int>(j, "format_version", "manifest");
  if (m.format_version != 1) {
    throw std::runtime_error("unsupported manifest format_version " + std::to_string(m.format_version));
  }
  m.base_url = field<std::string>(j, "base_url", "manifest");
  m.recorded_at = j.value("recorded_at", "");
  m.note = j.value("note", "");
  const auto entries = field<json>(j, "entries", "manifest");
  if (!entries.is_array()) throw std::runtime_error("manifest entries is not an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& raw = entries[i];
    const std::string where = "manifest entry " + std::to_string(i);
    if (!raw.is_object()) throw std::runtime_error(where + " is not an object");
    ManifestEntry e;
    e.target = field<std::string>(raw, "target", where);
    e.file = field<std::string>(raw, "file", where);
    e.status = field<int>(raw, "status", where);
    e.content_type = raw.value("content_type", "");
    e.recorded_at = raw.value("recorded_at", "");
    e.bytes = raw.value("bytes", std::uint64_t{0});
    e.sha256 = raw.value("sha256", "");
    e.error = raw.value("error", "");
    m.entries.push_back(std::move(e));
  }
  return m;
}

FixtureBackend::FixtureBackend(fs::path dir) : dir_(std::move(dir)) {
  const fs::path manifest_path = dir_ / "manifest.json";
  try {
    if (!fs::exists(manifest_path)) throw std::runtime_error("no manifest.json in " + dir_.string());
    manifest_ = parse_manifest(json::parse(read_file(manifest_path)));
    for (std::size_t i = 0; i < manifest_.entries.size(); ++i) by_target_[manifest_.entries[i].target] = i;
  } catch (const std::exception& e) {
    load_error_ = e.what();
    manifest_ = Manifest{};
    by_target_.clear();
  }
}

Response FixtureBackend::get(const Request& request) const {
  if (!load_error_.empty()) throw ClientError(ErrorKind::Transport, request.target, "fixture snapshot unusable: " + load_error_);
  auto it = by_target_.find(request.target);
  if (it == by_target_.end()) {
    throw ClientError(ErrorKind::NotFound, request.target,
                      "no fixture recorded for this target; re-record it with `dracor-mcp fixtures record`");
  }
  const ManifestEntry& entry = manifest_.entries[it->second];
  if (!entry.error.empty()) {
    throw ClientError(ErrorKind::Transport, request.target, "recording of this target failed: " + entry.error);
  }
  Response r;
  r.status = entry.status;
  r.content_type = entry.content_type;
  try {
    r.body = read_file(dir_ / entry.file);
  } catch (const std::exception& e) {
    throw ClientError(ErrorKind::Transport, request.target, e.what());
  }
  return r;
}

std::string FixtureBackend::describe() const {
  return "fixtures:" + dir_.string() + (load_error_.empty() ? "" : " (unusable: " + load_error_ + ")");
}

std::vector<std::string> parse_request_plan(std::string_view text) {
  std::vector<std::string> plan;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    plan.push_back(line.substr(first, last - first + 1));
  }
  return plan;
}

std::string accept_for(std::string_view target) {
  const std::string_view path = target.substr(0, target.find('?'));
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with("/spoken-text") || ends_with("/stage-directions")) return "text/plain";
  if (ends_with("/csv")) return "text/csv";
  if (ends_with("/tei")) return "application/xml";
  if (ends_with(".yaml")) return "application/yaml";
  if (ends_with(".md")) return "text/markdown";
  return "application/json";
}

RecordResult record_fixtures(const Backend& backend, std::string_view base_url, const std::vector<std::string>& plan,
                             const fs::path& out_dir, std::string_view recorded_at) {
  fs::create_directories(out_dir);
  RecordResult result;
  result.manifest.base_url = std::string(base_url);
  result.manifest.recorded_at = std::string(recorded_at);
  result.manifest.note = "recorded from " + backend.describe();
  for (const auto& target : plan) {
    ManifestEntry e;
    e.target = target;
    e.file = fixture_key(target);
    e.recorded_at = std::string(recorded_at);
    try {
      Response r = backend.get(Request{target, accept_for(target)});
      e.status = r.status;
      e.content_type = r.content_type;
      e.bytes = r.body.size();
      e.sha256 = sha256_hex(r.body);
      write_file(out_dir / e.file, r.body);
      if (r.status < 200 || r.status >= 300) ++result.failures;
    } catch (const std::exception& ex) {
      e.status = 0;
      e.error = ex.what();
      ++result.failures;
    }
    result.manifest.entries.push_back(std::move(e));
  }
  std::sort(result.manifest.entries.begin(), result.manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.target < b.target; });
  write_file(out_dir / "manifest.json", to_json(result.manifest).dump(1) + "\n");
  return result;
}

}  // namespace dracor_mcp::api
