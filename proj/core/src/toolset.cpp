#include "dracor_mcp/toolset.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "dracor_mcp/fixture_backend.hpp"
#include "dracor_mcp/json_format.hpp"
#include "dracor_mcp/text_fold.hpp"

namespace dracor_mcp::tools {

using api::DracorClient;

namespace {

const std::string kCorpusArgDoc = "Identifier of a corpus, e.g. `ger`, `rus`, `als`";
const std::string kPlayArgDoc = "Identifier of a play (its slug), e.g. `lessing-emilia-galotti`";

ArgDoc corpus_arg() { return {"corpus_name", ValueType::String, kCorpusArgDoc, std::nullopt}; }
ArgDoc play_arg() { return {"play_name", ValueType::String, kPlayArgDoc, std::nullopt}; }

ArgDoc items_per_page_arg(const std::string& what) {
  return {"items_per_page", ValueType::Integer, "Number of " + what + " to retrieve in a batch. Defaults to 50.", json(50)};
}
ArgDoc page_arg() {
  return {"page", ValueType::Integer,
          "Number of page of the results to retrieve in a batch request. Defaults to 1 - the first 50 plays.", json(1)};
}

ToolResult ok_json(const json& payload) { return {stable_dump(payload), false}; }
ToolResult ok_text(std::string text) { return {std::move(text), false}; }

std::string arg_string(const json& args, const char* key) { return args.at(key).get<std::string>(); }

std::optional<std::int64_t> arg_optional_int(const json& args, const char* key) {
  const auto& v = args.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<std::int64_t>();
}

bool contains_folded(const std::string& haystack, const std::string& folded_query) {
  return fold_for_search(haystack).find(folded_query) != std::string::npos;
}

std::string require_query(std::string_view query, const char* arg) {
  std::string folded = fold_for_search(query);
  if (folded.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw std::invalid_argument(std::string(arg) + " must not be empty");
  }
  return folded;
}

std::string trim_slash(std::string s) {
  while (!s.empty() && s.back() == '/') s.pop_back();
  return s;
}

void add(ToolRegistry& r, std::string name, Category category, Docstring doc, std::optional<std::string> paired,
         Handler handler) {
  r.register_tool(ToolDescriptor{std::move(name), category, std::move(doc), std::move(paired), std::move(handler)});
}

}  // namespace

std::string group_thousands(std::uint64_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  const auto len = digits.size();
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0 && (len - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

ToolResult guard_response(std::string text, std::size_t max_chars, const std::optional<std::string>& paired_helper) {
  const std::size_t n = char_count(text);
  if (n <= max_chars) return ToolResult{std::move(text), false};
  std::string message = "Response exceeded maximum length (" + group_thousands(max_chars) + " characters); the full response has " +
                        group_thousands(n) + " characters.";
  if (paired_helper) {
    message += " Use the tool `" + *paired_helper + "` instead, which retrieves the data in batches or in a reduced form.";
  }
  return ToolResult{std::move(message), true};
}

json to_json(const PageEnvelope& p) {
  return {{"page", p.page},
          {"items_per_page", p.items_per_page},
          {"total_items", p.total_items},
          {"total_pages", p.total_pages},
          {"items", p.items}};
}

PageEnvelope paginate(const json& items, std::int64_t items_per_page, std::int64_t page) {
  if (!items.is_array()) throw std::invalid_argument("paginate expects an array");
  if (items_per_page < 1) throw std::invalid_argument("items_per_page must be at least 1");
  if (page < 1) throw std::invalid_argument("page must be at least 1");
  PageEnvelope env;
  env.page = page;
  env.items_per_page = items_per_page;
  env.total_items = static_cast<std::int64_t>(items.size());
  env.total_pages = (env.total_items + items_per_page - 1) / items_per_page;
  if (page <= env.total_pages) {
    const auto begin = (page - 1) * items_per_page;
    const auto end = std::min(env.total_items, begin + items_per_page);
    for (auto i = begin; i < end; ++i) env.items.push_back(items[static_cast<std::size_t>(i)]);
  }
  return env;
}

json minimal_projection(const api::MetadataRow& row) {
  auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  return {{"name", row.name},
          {"title", opt(row.title)},
          {"first_author", opt(row.first_author)},
          {"year_normalized", opt(row.year_normalized)},
          {"network_size", opt(row.network_size)}};
}

json search_entry(const api::PlayListing& play) {
  json authors = json::array();
  for (const auto& a : play.authors) authors.push_back(a.name);
  auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  return {{"name", play.name},
          {"title", opt(play.title)},
          {"authors", authors},
          {"year_normalized", opt(play.year_normalized)},
          {"network_size", opt(play.network_size)}};
}

std::vector<api::PlayListing> plays_by_title(const std::vector<api::PlayListing>& plays, std::string_view query) {
  const std::string q = require_query(query, "title_query");
  std::vector<api::PlayListing> out;
  for (const auto& p : plays) {
    if (p.title && contains_folded(*p.title, q)) out.push_back(p);
  }
  return out;
}

std::vector<api::PlayListing> plays_by_author(const std::vector<api::PlayListing>& plays, std::string_view query) {
  const std::string q = require_query(query, "author_query");
  std::vector<api::PlayListing> out;
  for (const auto& p : plays) {
    for (const auto& a : p.authors) {
      if (contains_folded(a.name, q)) {
        out.push_back(p);
        break;
      }
    }
  }
  return out;
}

std::vector<api::PlayListing> plays_by_year(const std::vector<api::PlayListing>& plays,
                                            std::optional<std::int64_t> year_from,
                                            std::optional<std::int64_t> year_to) {
  if (year_from && year_to && *year_from > *year_to) {
    throw std::invalid_argument("year_from must not be greater than year_to");
  }
  std::vector<api::PlayListing> out;
  for (const auto& p : plays) {
    if (!p.year_normalized) continue;
    if (year_from && *p.year_normalized < *year_from) continue;
    if (year_to && *p.year_normalized > *year_to) continue;
    out.push_back(p);
  }
  return out;
}

json play_links(std::string_view api_base_url, std::string_view frontend_url, std::string_view corpus,
                std::string_view play) {
  const std::string c = api::percent_encode(corpus);
  const std::string p = api::percent_encode(play);
  const std::string front = trim_slash(std::string(frontend_url)) + "/" + c + "/" + p;
  const std::string api_play = trim_slash(std::string(api_base_url)) + "/corpora/" + c + "/plays/" + p;
  return {{"frontend", front},
          {"download_tab", front + "#downloads"},
          {"tools_tab", front + "#tools"},
          {"api",
           {{"metadata", api_play},
            {"characters", api_play + "/characters"},
            {"metrics", api_play + "/metrics"},
            {"network_csv", api_play + "/networkdata/csv"},
            {"tei", api_play + "/tei"},
            {"spoken_text", api_play + "/spoken-text"},
            {"spoken_text_by_character", api_play + "/spoken-text-by-character"}}}};
}

// ---------------------------------------------------------------------------

void register_dracor_tools(ToolRegistry& r, std::shared_ptr<const DracorClient> client, ToolsetOptions options) {
  if (!client) throw std::invalid_argument("register_dracor_tools requires a client");
  if (options.max_chars == 0) throw std::invalid_argument("max_chars must be positive");
  const auto c = client;

  add(r, "get_api_info", Category::Wrapper,
      {"Get information about the DraCor API instance, e.g. its version",
       "Data is retrieved from the endpoint /info", "", {}},
      std::nullopt, [c](const json&) { return ok_json(c->fetch_api_info()); });

  add(r, "get_corpora", Category::Wrapper,
      {"List all available corpora with the number of plays and characters",
       "Data is retrieved from the endpoint /corpora?include=metrics",
       "The metrics of each corpus contain the number of plays and the number of characters in the entire corpus.",
       {}},
      std::nullopt, [c](const json&) { return ok_json(api::to_json(c->fetch_corpora())); });

  add(r, "get_corpus", Category::Wrapper,
      {"Get the list of plays in a corpus",
       "Data is retrieved from the endpoint /corpora/{corpusname}",
       "If the list of plays does not fit into the context use the tool "
       "`get_minimal_data_of_plays_of_corpus_helper` instead,\nwhich returns only essential fields of the plays in batches.",
       {corpus_arg()}},
      "get_minimal_data_of_plays_of_corpus_helper",
      [c](const json& a) { return ok_json(api::to_json(c->fetch_corpus(arg_string(a, "corpus_name")))); });

  add(r, "get_corpus_metadata", Category::Wrapper,
      {"Get extended metadata of all plays in a corpus",
       "Data is retrieved from the endpoint /corpora/{corpusname}/metadata",
       "If the data on the plays does not fit into the context use the tool `get_corpus_metadata_paged_helper` "
       "instead,\nwhich allows for retrieving metadata on the plays in batches.",
       {corpus_arg()}},
      "get_corpus_metadata_paged_helper",
      [c](const json& a) { return ok_json(api::to_json(c->fetch_corpus_metadata(arg_string(a, "corpus_name")))); });

  add(r, "get_play_metadata", Category::Wrapper,
      {"Get metadata of a play, including its network size (the number of characters)",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}",
       "Use the tool `get_plays_in_corpus_by_title_helper` to find the identifier of a play by its title.",
       {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) {
        return ok_json(api::to_json(c->fetch_play_metadata(arg_string(a, "corpus_name"), arg_string(a, "play_name"))));
      });

  add(r, "get_play_characters", Category::Wrapper,
      {"Get the list of characters of a play with their metrics",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/characters",
       "Each entry carries gender, number of words, speech acts and scenes, and network metrics such as degree.",
       {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) {
        return ok_json(api::to_json(c->fetch_play_characters(arg_string(a, "corpus_name"), arg_string(a, "play_name"))));
      });

  add(r, "get_play_metrics", Category::Wrapper,
      {"Get network metrics of a play",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/metrics",
       "Metrics include network size, number of edges, density, average degree and the most connected characters.",
       {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) {
        return ok_json(api::to_json(c->fetch_play_metrics(arg_string(a, "corpus_name"), arg_string(a, "play_name"))));
      });

  add(r, "get_play_network", Category::Wrapper,
      {"Get the co-presence network of the characters of a play as a list of weighted edges",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/networkdata/csv",
       "", {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) {
        return ok_json(api::to_json(c->fetch_network_data(arg_string(a, "corpus_name"), arg_string(a, "play_name"))));
      });

  add(r, "get_spoken_text", Category::Wrapper,
      {"Get the spoken text of a play, optionally only of characters of one gender",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/spoken-text",
       "Use the tool `get_spoken_text_by_characters` to get the text grouped by character.",
       {corpus_arg(), play_arg(),
        {"gender", ValueType::String, "Restrict the text to characters of this gender: `FEMALE`, `MALE` or `UNKNOWN`. "
                                      "Defaults to None (all characters).",
         json(nullptr)}}},
      std::nullopt,
      [c](const json& a) {
        std::optional<api::Gender> gender;
        if (!a.at("gender").is_null()) {
          gender = api::parse_gender(a.at("gender").get<std::string>());
          if (!gender) return ToolResult{"Invalid argument 'gender': expected FEMALE, MALE or UNKNOWN", true};
        }
        return ok_text(c->fetch_spoken_text(arg_string(a, "corpus_name"), arg_string(a, "play_name"), gender));
      });

  add(r, "get_spoken_text_by_characters", Category::Wrapper,
      {"Get the spoken text of a play grouped by character",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/spoken-text-by-character",
       "", {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) {
        return ok_json(
            api::to_json(c->fetch_spoken_text_by_characters(arg_string(a, "corpus_name"), arg_string(a, "play_name"))));
      });

  add(r, "get_stage_directions", Category::Wrapper,
      {"Get the text of all stage directions of a play",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/stage-directions",
       "", {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) { return ok_text(c->fetch_stage_directions(arg_string(a, "corpus_name"), arg_string(a, "play_name"))); });

  add(r, "get_play_tei", Category::Wrapper,
      {"Get the full TEI-XML encoding of a play",
       "Data is retrieved from the endpoint /corpora/{corpusname}/plays/{playname}/tei",
       "The document is large; prefer the metadata, characters or text tools when they suffice.",
       {corpus_arg(), play_arg()}},
      std::nullopt,
      [c](const json& a) { return ok_text(c->fetch_tei(arg_string(a, "corpus_name"), arg_string(a, "play_name"))); });

  add(r, "get_corpus_metadata_paged_helper", Category::Helper,
      {"Get metadata on all plays in a corpus in batches",
       "Data is retrieved from the endpoint /corpora/{corpusname}/metadata, but in batches.",
       "This is the batched variant of the tool `get_corpus_metadata`.\n"
       "Plays are returned in the order of the API, which is NOT chronological.",
       {corpus_arg(), items_per_page_arg("play metadata"), page_arg()}},
      "get_corpus_metadata",
      [c](const json& a) {
        const auto rows = c->fetch_corpus_metadata(arg_string(a, "corpus_name"));
        return ok_json(to_json(paginate(api::to_json(rows), a.at("items_per_page").get<std::int64_t>(),
                                        a.at("page").get<std::int64_t>())));
      });

  add(r, "get_minimal_data_of_plays_of_corpus_helper", Category::Helper,
      {"Get essential data on the plays of a corpus in batches",
       "Data is retrieved from the endpoint /corpora/{corpusname}/metadata and reduced to name, title, first author, "
       "normalized year and network size.",
       "Use it when the output of the tool `get_corpus` does not fit into the context.\n"
       "Plays are returned in the order of the API, which is NOT chronological.",
       {corpus_arg(), items_per_page_arg("plays"), page_arg()}},
      "get_corpus",
      [c](const json& a) {
        json items = json::array();
        for (const auto& row : c->fetch_corpus_metadata(arg_string(a, "corpus_name"))) {
          items.push_back(minimal_projection(row));
        }
        return ok_json(to_json(paginate(items, a.at("items_per_page").get<std::int64_t>(), a.at("page").get<std::int64_t>())));
      });

  auto search = [c](const std::string& corpus, const auto& filter) {
    json out = json::array();
    for (const auto& p : filter(c->fetch_corpus(corpus).plays)) out.push_back(search_entry(p));
    return ok_json(out);
  };

  add(r, "get_plays_in_corpus_by_title_helper", Category::Search,
      {"Find plays in a corpus whose title contains a search string",
       "Data is retrieved from the endpoint /corpora/{corpusname} and filtered.",
       "Matching ignores case and diacritics. Each hit carries the play identifier and its network size.",
       {corpus_arg(), {"title_query", ValueType::String, "Part of the title, e.g. `Dantons Tod`", std::nullopt}}},
      std::nullopt,
      [search](const json& a) {
        const std::string q = arg_string(a, "title_query");
        return search(arg_string(a, "corpus_name"), [&](const auto& plays) { return plays_by_title(plays, q); });
      });

  add(r, "get_plays_in_corpus_by_author_helper", Category::Search,
      {"Find plays in a corpus by (part of) an author name",
       "Data is retrieved from the endpoint /corpora/{corpusname} and filtered.",
       "Matching ignores case and diacritics.",
       {corpus_arg(), {"author_query", ValueType::String, "Part of an author name, e.g. `Lessing`", std::nullopt}}},
      std::nullopt,
      [search](const json& a) {
        const std::string q = arg_string(a, "author_query");
        return search(arg_string(a, "corpus_name"), [&](const auto& plays) { return plays_by_author(plays, q); });
      });

  add(r, "get_plays_in_corpus_by_year_normalized", Category::Search,
      {"Find plays in a corpus whose normalized year lies in a range",
       "Data is retrieved from the endpoint /corpora/{corpusname} and filtered.",
       "Both bounds are inclusive. Plays without a normalized year are left out.",
       {corpus_arg(),
        {"year_from", ValueType::Integer, "Earliest normalized year. Defaults to None (no lower bound).", json(nullptr)},
        {"year_to", ValueType::Integer, "Latest normalized year. Defaults to None (no upper bound).", json(nullptr)}}},
      std::nullopt,
      [search](const json& a) {
        const auto from = arg_optional_int(a, "year_from");
        const auto to = arg_optional_int(a, "year_to");
        return search(arg_string(a, "corpus_name"), [&](const auto& plays) { return plays_by_year(plays, from, to); });
      });

  add(r, "get_openapi_specification", Category::Docs,
      {"Get the OpenAPI specification of the DraCor API",
       "Data is retrieved from the endpoint /openapi.yaml", "", {}},
      std::nullopt, [c](const json&) { return ok_text(c->fetch_openapi_spec()); });

  add(r, "get_dracor_based_research", Category::Frontend,
      {"Get the list of publications that use DraCor in their research",
       "Data is retrieved from the research page source of the DraCor frontend.", "", {}},
      std::nullopt, [c](const json&) { return ok_text(c->fetch_research_list()); });

  const std::string base = options.api_base_url;
  const std::string front = options.frontend_url;
  add(r, "get_links_to_playdata_helper", Category::Frontend,
      {"Get links to a play on the DraCor website and to its raw data",
       "",
       "Includes the download tab, the tools tab (Switchboard, Voyant, Gephi Lite) and the API endpoints of the play.",
       {corpus_arg(), play_arg()}},
      std::nullopt,
      [c, base, front](const json& a) {
        const std::string corpus = arg_string(a, "corpus_name");
        const std::string play = arg_string(a, "play_name");
        const auto listing = c->fetch_corpus(corpus);
        const bool known = std::any_of(listing.plays.begin(), listing.plays.end(),
                                       [&](const api::PlayListing& p) { return p.name == play; });
        if (!known) {
          throw api::ClientError(api::ErrorKind::NotFound, DracorClient::play_path(corpus, play),
                                 "play " + play + " is not part of corpus " + corpus);
        }
        return ok_json(play_links(base, front, corpus, play));
      });

  // Guard guidance names the paired tool only when that tool is a helper.
  std::map<std::string, std::string, std::less<>> helper_for;
  for (const ToolDescriptor* t : r.tools()) {
    if (!t->paired_tool) continue;
    const ToolDescriptor* partner = r.find(*t->paired_tool);
    if (partner && partner->category == Category::Helper) helper_for[t->name] = partner->name;
  }
  const std::size_t max_chars = options.max_chars;
  r.set_result_filter([helper_for, max_chars](const ToolDescriptor& tool, ToolResult result) {
    std::optional<std::string> helper;
    if (auto it = helper_for.find(tool.name); it != helper_for.end()) helper = it->second;
    return guard_response(std::move(result.text), max_chars, helper);
  });
}

}  // namespace dracor_mcp::tools
