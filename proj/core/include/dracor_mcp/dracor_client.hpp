// Typed client for the DraCor REST API v1.
//
// Two interchangeable backends sit behind the client: live HTTP and an
// on-disk fixture snapshot (see fixture_backend.hpp). Typed views keep every
// JSON member they do not model in an `extra` object, so converting a view
// back with to_json() reproduces the payload it was parsed from.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dracor_mcp::api {

using json = nlohmann::json;

inline constexpr std::string_view kDefaultBaseUrl = "https://dracor.org/api/v1";
inline constexpr std::string_view kDefaultRegistryUrl =
    "https://raw.githubusercontent.com/dracor-org/dracor-registry/main/corpora.json";
inline constexpr std::string_view kDefaultResearchUrl =
    "https://raw.githubusercontent.com/dracor-org/dracor-frontend/main/public/doc/research.md";

enum class ErrorKind { Transport, NotFound, Decode };

std::string_view to_string(ErrorKind kind);

// Every client failure names the request target it came from.
class ClientError : public std::runtime_error {
 public:
  ClientError(ErrorKind kind, std::string target, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }
  const std::string& target() const noexcept { return target_; }

 private:
  ErrorKind kind_;
  std::string target_;
};

// `target` is either a path relative to the API base ("/corpora?include=metrics")
// or an absolute http(s) URL for documents hosted elsewhere.
struct Request {
  std::string target;
  std::string accept = "application/json";
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual Response get(const Request& request) const = 0;
  virtual std::string describe() const = 0;
};

// ---------------------------------------------------------------------------
// Typed views

enum class Gender { Male, Female, Unknown };

std::optional<Gender> parse_gender(std::string_view text);
std::string_view to_string(Gender gender);

struct Author {
  std::string name;
  std::optional<Gender> gender;
  json extra = json::object();
};

struct CorpusSummary {
  std::string name;
  std::string title;
  std::int64_t num_of_plays = 0;
  std::int64_t num_of_characters = 0;
  json extra = json::object();
};

struct PlayListing {
  std::string name;
  std::optional<std::string> title;
  std::vector<Author> authors;
  std::optional<std::int64_t> year_normalized;
  std::optional<std::int64_t> network_size;
  json extra = json::object();
};

struct CorpusDetail {
  std::string name;
  std::optional<std::string> title;
  std::vector<PlayListing> plays;
  json extra = json::object();
};

// One row of /corpora/{corpus}/metadata.
struct MetadataRow {
  std::string name;
  std::optional<std::string> title;
  std::optional<std::string> first_author;
  std::optional<std::int64_t> year_normalized;
  std::optional<std::int64_t> network_size;
  std::optional<std::int64_t> num_female;
  std::optional<std::int64_t> num_male;
  std::optional<std::int64_t> num_unknown;
  json extra = json::object();
};

struct CharacterRecord {
  std::string id;
  std::optional<std::string> name;
  std::optional<Gender> gender;
  std::optional<std::int64_t> num_of_words;
  std::optional<std::int64_t> num_of_speech_acts;
  std::optional<std::int64_t> num_of_scenes;
  std::optional<std::int64_t> degree;
  json extra = json::object();
};

struct PlayMetadata {
  std::string name;
  std::optional<std::string> title;
  std::vector<Author> authors;
  std::optional<std::int64_t> year_normalized;
  std::optional<std::int64_t> network_size;
  json extra = json::object();
};

struct PlayMetrics {
  std::int64_t network_size = 0;
  std::int64_t edge_count = 0;
  double density = 0.0;
  double average_degree = 0.0;
  json extra = json::object();
};

struct NetworkEdge {
  std::string source;
  std::string target;
  std::string type = "Undirected";
  double weight = 1.0;

  friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

struct CharacterText {
  std::string id;
  std::optional<std::string> label;
  std::optional<Gender> gender;
  std::vector<std::string> text;
  json extra = json::object();
};

// Parsers throw ClientError(Decode) naming `target` when a modeled member has
// the wrong shape.
CorpusSummary parse_corpus_summary(const json& j, std::string_view target);
PlayListing parse_play_listing(const json& j, std::string_view target);
CorpusDetail parse_corpus_detail(const json& j, std::string_view target);
MetadataRow parse_metadata_row(const json& j, std::string_view target);
CharacterRecord parse_character(const json& j, std::string_view target);
PlayMetadata parse_play_metadata(const json& j, std::string_view target);
PlayMetrics parse_play_metrics(const json& j, std::string_view target);
CharacterText parse_character_text(const json& j, std::string_view target);
std::vector<NetworkEdge> parse_network_csv(std::string_view csv, std::string_view target);

json to_json(const Author& v);
json to_json(const CorpusSummary& v);
json to_json(const PlayListing& v);
json to_json(const CorpusDetail& v);
json to_json(const MetadataRow& v);
json to_json(const CharacterRecord& v);
json to_json(const PlayMetadata& v);
json to_json(const PlayMetrics& v);
json to_json(const NetworkEdge& v);
json to_json(const CharacterText& v);

template <typename T>
json to_json(const std::vector<T>& items) {
  json out = json::array();
  for (const auto& item : items) out.push_back(to_json(item));
  return out;
}

// ---------------------------------------------------------------------------

struct ClientOptions {
  std::string registry_url{kDefaultRegistryUrl};
  std::string research_url{kDefaultResearchUrl};
};

class DracorClient {
 public:
  explicit DracorClient(std::shared_ptr<const Backend> backend, ClientOptions options = {});

  std::vector<CorpusSummary> fetch_corpora() const;
  CorpusDetail fetch_corpus(std::string_view corpus) const;
  std::vector<MetadataRow> fetch_corpus_metadata(std::string_view corpus) const;
  std::vector<CharacterRecord> fetch_play_characters(std::string_view corpus, std::string_view play) const;
  PlayMetadata fetch_play_metadata(std::string_view corpus, std::string_view play) const;
  PlayMetrics fetch_play_metrics(std::string_view corpus, std::string_view play) const;
  std::string fetch_spoken_text(std::string_view corpus, std::string_view play,
                                std::optional<Gender> gender = std::nullopt) const;
  std::vector<CharacterText> fetch_spoken_text_by_characters(std::string_view corpus, std::string_view play) const;
  std::vector<NetworkEdge> fetch_network_data(std::string_view corpus, std::string_view play) const;
  std::string fetch_stage_directions(std::string_view corpus, std::string_view play) const;
  std::string fetch_tei(std::string_view corpus, std::string_view play) const;
  json fetch_api_info() const;
  std::string fetch_openapi_spec() const;
  std::string fetch_research_list() const;
  json fetch_corpus_registry() const;

  json get_json(const std::string& target) const;
  std::string get_text(const std::string& target, const std::string& accept = "text/plain") const;

  const Backend& backend() const noexcept { return *backend_; }

  static std::string corpus_path(std::string_view corpus);
  static std::string play_path(std::string_view corpus, std::string_view play);

 private:
  std::shared_ptr<const Backend> backend_;
  ClientOptions options_;
};

}  // namespace dracor_mcp::api
