#include "dracor_mcp/dracor_client.hpp"

#include "dracor_mcp/fixture_backend.hpp"

namespace dracor_mcp::api {

namespace {

[[noreturn]] void decode_error(std::string_view target, const std::string& what) {
  throw ClientError(ErrorKind::Decode, std::string(target), what);
}

json require_object(const json& j, std::string_view target, std::string_view what) {
  if (!j.is_object()) decode_error(target, std::string(what) + " is not a JSON object");
  return j;
}

// Removes `key` from `obj` and returns it when it has the expected shape;
// members of another shape stay in `obj` untouched.
template <typename Pred>
std::optional<json> take_if(json& obj, const char* key, Pred pred) {
  auto it = obj.find(key);
  if (it == obj.end() || !pred(*it)) return std::nullopt;
  json value = std::move(*it);
  obj.erase(it);
  return value;
}

std::optional<std::string> take_string(json& obj, const char* key) {
  auto v = take_if(obj, key, [](const json& x) { return x.is_string(); });
  if (!v) return std::nullopt;
  return v->get<std::string>();
}

std::optional<std::int64_t> take_int(json& obj, const char* key) {
  auto v = take_if(obj, key, [](const json& x) { return x.is_number_integer(); });
  if (!v) return std::nullopt;
  return v->get<std::int64_t>();
}

std::optional<double> take_number(json& obj, const char* key) {
  auto v = take_if(obj, key, [](const json& x) { return x.is_number(); });
  if (!v) return std::nullopt;
  return v->get<double>();
}

std::optional<Gender> take_gender(json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  auto g = parse_gender(it->get<std::string>());
  if (g) obj.erase(it);
  return g;
}

std::string require_string(json& obj, const char* key, std::string_view target, std::string_view what) {
  auto v = take_string(obj, key);
  if (!v) decode_error(target, std::string(what) + " lacks a string \"" + key + "\"");
  return *v;
}

std::vector<Author> take_authors(json& obj, std::string_view target) {
  std::vector<Author> authors;
  // An empty list stays in `extra` so it survives the round trip.
  auto v = take_if(obj, "authors", [](const json& x) { return x.is_array() && !x.empty(); });
  if (!v) return authors;
  for (const auto& a : *v) {
    json rest = require_object(a, target, "author");
    Author author;
    author.name = require_string(rest, "name", target, "author");
    author.gender = take_gender(rest, "gender");
    author.extra = std::move(rest);
    authors.push_back(std::move(author));
  }
  return authors;
}

void put(json& out, const char* key, const std::optional<std::string>& v) {
  if (v) out[key] = *v;
}
void put(json& out, const char* key, const std::optional<std::int64_t>& v) {
  if (v) out[key] = *v;
}
void put(json& out, const char* key, const std::optional<Gender>& v) {
  if (v) out[key] = std::string(to_string(*v));
}

json base(const json& extra) { return extra.is_object() ? extra : json::object(); }

std::string encode_segment(std::string_view segment) { return percent_encode(segment); }

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Transport:
      return "transport";
    case ErrorKind::NotFound:
      return "not_found";
    case ErrorKind::Decode:
      return "decode";
  }
  return "transport";
}

ClientError::ClientError(ErrorKind kind, std::string target, const std::string& message)
    : std::runtime_error(message + " [" + std::string(to_string(kind)) + ": " + target + "]"),
      kind_(kind),
      target_(std::move(target)) {}

std::optional<Gender> parse_gender(std::string_view text) {
  if (text == "MALE") return Gender::Male;
  if (text == "FEMALE") return Gender::Female;
  if (text == "UNKNOWN") return Gender::Unknown;
  return std::nullopt;
}

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::Male:
      return "MALE";
    case Gender::Female:
      return "FEMALE";
    case Gender::Unknown:
      return "UNKNOWN";
  }
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// parsing

CorpusSummary parse_corpus_summary(const json& j, std::string_view target) {
  json rest = require_object(j, target, "corpus entry");
  CorpusSummary s;
  s.name = require_string(rest, "name", target, "corpus entry");
  if (s.name.empty()) decode_error(target, "corpus entry has an empty name");
  s.title = require_string(rest, "title", target, "corpus " + s.name);
  auto metrics = rest.find("metrics");
  if (metrics == rest.end() || !metrics->is_object()) {
    decode_error(target, "corpus " + s.name + " lacks a metrics object (request include=metrics)");
  }
  auto plays = take_int(*metrics, "plays");
  auto characters = take_int(*metrics, "characters");
  if (!plays || !characters) decode_error(target, "corpus " + s.name + " metrics lack plays/characters counts");
  if (*plays < 0 || *characters < 0) decode_error(target, "corpus " + s.name + " has negative counts");
  s.num_of_plays = *plays;
  s.num_of_characters = *characters;
  if (metrics->empty()) rest.erase("metrics");
  s.extra = std::move(rest);
  return s;
}

PlayListing parse_play_listing(const json& j, std::string_view target) {
  json rest = require_object(j, target, "play entry");
  PlayListing p;
  p.name = require_string(rest, "name", target, "play entry");
  p.title = take_string(rest, "title");
  p.authors = take_authors(rest, target);
  p.year_normalized = take_int(rest, "yearNormalized");
  p.network_size = take_int(rest, "networkSize");
  p.extra = std::move(rest);
  return p;
}

CorpusDetail parse_corpus_detail(const json& j, std::string_view target) {
  json rest = require_object(j, target, "corpus");
  CorpusDetail c;
  c.name = require_string(rest, "name", target, "corpus");
  c.title = take_string(rest, "title");
  auto plays = take_if(rest, "plays", [](const json& x) { return x.is_array(); });
  if (!plays) decode_error(target, "corpus " + c.name + " lacks a plays array");
  for (const auto& p : *plays) c.plays.push_back(parse_play_listing(p, target));
  c.extra = std::move(rest);
  return c;
}

MetadataRow parse_metadata_row(const json& j, std::string_view target) {
  json rest = require_object(j, target, "metadata row");
  MetadataRow r;
  r.name = require_string(rest, "name", target, "metadata row");
  r.title = take_string(rest, "title");
  r.first_author = take_string(rest, "firstAuthor");
  r.year_normalized = take_int(rest, "yearNormalized");
  r.network_size = take_int(rest, "size");
  r.num_female = take_int(rest, "numOfSpeakersFemale");
  r.num_male = take_int(rest, "numOfSpeakersMale");
  r.num_unknown = take_int(rest, "numOfSpeakersUnknown");
  r.extra = std::move(rest);
  return r;
}

CharacterRecord parse_character(const json& j, std::string_view target) {
  json rest = require_object(j, target, "character");
  CharacterRecord c;
  c.id = require_string(rest, "id", target, "character");
  c.name = take_string(rest, "name");
  c.gender = take_gender(rest, "gender");
  c.num_of_words = take_int(rest, "numOfWords");
  c.num_of_speech_acts = take_int(rest, "numOfSpeechActs");
  c.num_of_scenes = take_int(rest, "numOfScenes");
  c.degree = take_int(rest, "degree");
  for (const auto* v : {&c.num_of_words, &c.num_of_speech_acts, &c.num_of_scenes, &c.degree}) {
    if (*v && **v < 0) decode_error(target, "character " + c.id + " has a negative count");
  }
  c.extra = std::move(rest);
  return c;
}

PlayMetadata parse_play_metadata(const json& j, std::string_view target) {
  json rest = require_object(j, target, "play");
  PlayMetadata p;
  p.name = require_string(rest, "name", target, "play");
  p.title = take_string(rest, "title");
  p.authors = take_authors(rest, target);
  p.year_normalized = take_int(rest, "yearNormalized");
  p.network_size = take_int(rest, "networkSize");
  p.extra = std::move(rest);
  return p;
}

PlayMetrics parse_play_metrics(const json& j, std::string_view target) {
  json rest = require_object(j, target, "metrics");
  PlayMetrics m;
  auto size = take_int(rest, "size");
  auto edges = take_int(rest, "numEdges");
  auto density = take_number(rest, "density");
  auto degree = take_number(rest, "averageDegree");
  if (!size || !edges || !density || !degree) {
    decode_error(target, "metrics lack size/numEdges/density/averageDegree");
  }
  m.network_size = *size;
  m.edge_count = *edges;
  m.density = *density;
  m.average_degree = *degree;
  if (m.density < 0.0 || m.density > 1.0) decode_error(target, "density outside [0,1]");
  m.extra = std::move(rest);
  return m;
}

CharacterText parse_character_text(const json& j, std::string_view target) {
  json rest = require_object(j, target, "spoken text block");
  CharacterText t;
  t.id = require_string(rest, "id", target, "spoken text block");
  t.label = take_string(rest, "label");
  t.gender = take_gender(rest, "gender");
  auto lines = take_if(rest, "text", [](const json& x) {
    if (!x.is_array() || x.empty()) return false;
    for (const auto& l : x) {
      if (!l.is_string()) return false;
    }
    return true;
  });
  if (lines) {
    for (const auto& l : *lines) t.text.push_back(l.get<std::string>());
  } else if (rest.contains("text") && rest.at("text") != json::array()) {
    decode_error(target, "spoken text block " + t.id + " has a malformed text member");
  }
  t.extra = std::move(rest);
  return t;
}

std::vector<NetworkEdge> parse_network_csv(std::string_view csv, std::string_view target) {
  std::vector<NetworkEdge> edges;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    auto line = csv.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("Source", 0) == 0) continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
      auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 4) decode_error(target, "network CSV row has " + std::to_string(cells.size()) + " cells");
    NetworkEdge e;
    e.source = std::string(cells[0]);
    e.type = std::string(cells[1]);
    e.target = std::string(cells[2]);
    try {
      e.weight = std::stod(std::string(cells[3]));
    } catch (const std::exception&) {
      decode_error(target, "network CSV weight is not a number");
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

// ---------------------------------------------------------------------------
// serialization

json to_json(const Author& v) {
  json out = base(v.extra);
  out["name"] = v.name;
  put(out, "gender", v.gender);
  return out;
}

json to_json(const CorpusSummary& v) {
  json out = base(v.extra);
  out["name"] = v.name;
  out["title"] = v.title;
  json& metrics = out["metrics"];
  if (!metrics.is_object()) metrics = json::object();
  metrics["plays"] = v.num_of_plays;
  metrics["characters"] = v.num_of_characters;
  return out;
}

json to_json(const PlayListing& v) {
  json out = base(v.extra);
  out["name"] = v.name;
  put(out, "title", v.title);
  if (!v.authors.empty()) out["authors"] = to_json(v.authors);
  put(out, "yearNormalized", v.year_normalized);
  put(out, "networkSize", v.network_size);
  return out;
}

json to_json(const CorpusDetail& v) {
  json out = base(v.extra);
  out["name"] = v.name;
  put(out, "title", v.title);
  out["plays"] = to_json(v.plays);
  return out;
}

json to_json(const MetadataRow& v) {
  json out = base(v.extra);
  out["name"] = v.name;
  put(out, "title", v.title);
  put(out, "firstAuthor", v.first_author);
  put(out, "yearNormalized", v.year_normalized);
  put(out, "size", v.network_size);
  put(out, "numOfSpeakersFemale", v.num_female);
  put(out, "numOfSpeakersMale", v.num_male);
  put(out, "numOfSpeakersUnknown", v.num_unknown);
  return out;
}

json to_json(const CharacterRecord& v) {
  json out = base(v.extra);
  out["id"] = v.id;
  put(out, "name", v.name);
  put(out, "gender", v.gender);
  put(out, "numOfWords", v.num_of_words);
  put(out, "numOfSpeechActs", v.num_of_speech_acts);
  put(out, "numOfScenes", v.num_of_scenes);
  put(out, "degree", v.degree);
  return out;
}

json to_json(const PlayMetadata& v) {
  json out = base(v.extra);
  out["name"] = v.name;
  put(out, "title", v.title);
  if (!v.authors.empty()) out["authors"] = to_json(v.authors);
  put(out, "yearNormalized", v.year_normalized);
  put(out, "networkSize", v.network_size);
  return out;
}

json to_json(const PlayMetrics& v) {
  json out = base(v.extra);
  out["size"] = v.network_size;
  out["numEdges"] = v.edge_count;
  out["density"] = v.density;
  out["averageDegree"] = v.average_degree;
  return out;
}

json to_json(const NetworkEdge& v) {
  return {{"source", v.source}, {"target", v.target}, {"type", v.type}, {"weight", v.weight}};
}

json to_json(const CharacterText& v) {
  json out = base(v.extra);
  out["id"] = v.id;
  put(out, "label", v.label);
  put(out, "gender", v.gender);
  if (!v.text.empty()) out["text"] = v.text;
  return out;
}

// ---------------------------------------------------------------------------
// client

DracorClient::DracorClient(std::shared_ptr<const Backend> backend, ClientOptions options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw std::invalid_argument("DracorClient requires a backend");
}

std::string DracorClient::corpus_path(std::string_view corpus) {
  return "/corpora/" + encode_segment(corpus);
}

std::string DracorClient::play_path(std::string_view corpus, std::string_view play) {
  return corpus_path(corpus) + "/plays/" + encode_segment(play);
}

std::string DracorClient::get_text(const std::string& target, const std::string& accept) const {
  Response r = backend_->get(Request{target, accept});
  if (r.status == 404) throw ClientError(ErrorKind::NotFound, target, "resource not found");
  if (r.status < 200 || r.status >= 300) {
    throw ClientError(ErrorKind::Transport, target, "unexpected HTTP status " + std::to_string(r.status));
  }
  return std::move(r.body);
}

json DracorClient::get_json(const std::string& target) const {
  const std::string body = get_text(target, "application/json");
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ClientError(ErrorKind::Decode, target, std::string("response is not valid JSON: ") + e.what());
  }
}

std::vector<CorpusSummary> DracorClient::fetch_corpora() const {
  const std::string target = "/corpora?include=metrics";
  const json doc = get_json(target);
  if (!doc.is_array()) throw ClientError(ErrorKind::Decode, target, "expected a JSON array of corpora");
  std::vector<CorpusSummary> out;
  for (const auto& c : doc) out.push_back(parse_corpus_summary(c, target));
  return out;
}

CorpusDetail DracorClient::fetch_corpus(std::string_view corpus) const {
  const std::string target = corpus_path(corpus);
  return parse_corpus_detail(get_json(target), target);
}

std::vector<MetadataRow> DracorClient::fetch_corpus_metadata(std::string_view corpus) const {
  const std::string target = corpus_path(corpus) + "/metadata";
  const json doc = get_json(target);
  if (!doc.is_array()) throw ClientError(ErrorKind::Decode, target, "expected a JSON array of metadata rows");
  std::vector<MetadataRow> out;
  out.reserve(doc.size());
  for (const auto& row : doc) out.push_back(parse_metadata_row(row, target));
  return out;
}

std::vector<CharacterRecord> DracorClient::fetch_play_characters(std::string_view corpus,
                                                                 std::string_view play) const {
  const std::string target = play_path(corpus, play) + "/characters";
  const json doc = get_json(target);
  if (!doc.is_array()) throw ClientError(ErrorKind::Decode, target, "expected a JSON array of characters");
  std::vector<CharacterRecord> out;
  for (const auto& c : doc) out.push_back(parse_character(c, target));
  return out;
}

PlayMetadata DracorClient::fetch_play_metadata(std::string_view corpus, std::string_view play) const {
  const std::string target = play_path(corpus, play);
  return parse_play_metadata(get_json(target), target);
}

PlayMetrics DracorClient::fetch_play_metrics(std::string_view corpus, std::string_view play) const {
  const std::string target = play_path(corpus, play) + "/metrics";
  return parse_play_metrics(get_json(target), target);
}

std::string DracorClient::fetch_spoken_text(std::string_view corpus, std::string_view play,
                                            std::optional<Gender> gender) const {
  std::string target = play_path(corpus, play) + "/spoken-text";
  if (gender) target += "?gender=" + std::string(to_string(*gender));
  return get_text(target, "text/plain");
}

std::vector<CharacterText> DracorClient::fetch_spoken_text_by_characters(std::string_view corpus,
                                                                         std::string_view play) const {
  const std::string target = play_path(corpus, play) + "/spoken-text-by-character";
  const json doc = get_json(target);
  if (!doc.is_array()) throw ClientError(ErrorKind::Decode, target, "expected a JSON array of text blocks");
  std::vector<CharacterText> out;
  for (const auto& b : doc) out.push_back(parse_character_text(b, target));
  return out;
}

std::vector<NetworkEdge> DracorClient::fetch_network_data(std::string_view corpus, std::string_view play) const {
  const std::string target = play_path(corpus, play) + "/networkdata/csv";
  return parse_network_csv(get_text(target, "text/csv"), target);
}

std::string DracorClient::fetch_stage_directions(std::string_view corpus, std::string_view play) const {
  return get_text(play_path(corpus, play) + "/stage-directions", "text/plain");
}

std::string DracorClient::fetch_tei(std::string_view corpus, std::string_view play) const {
  return get_text(play_path(corpus, play) + "/tei", "application/xml");
}

json DracorClient::fetch_api_info() const { return get_json("/info"); }

std::string DracorClient::fetch_openapi_spec() const { return get_text("/openapi.yaml", "application/yaml"); }

std::string DracorClient::fetch_research_list() const { return get_text(options_.research_url, "text/markdown"); }

json DracorClient::fetch_corpus_registry() const { return get_json(options_.registry_url); }

}  // namespace dracor_mcp::api
