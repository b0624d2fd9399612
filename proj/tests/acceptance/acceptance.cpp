// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "dracor_mcp/eval.hpp"
#include "dracor_mcp/json_format.hpp"
#include "dracor_mcp/oracle.hpp"
#include "dracor_mcp/registry.hpp"
#include "dracor_mcp/text_fold.hpp"
#include "dracor_mcp/toolset.hpp"
#include "test_support.hpp"

using namespace dracor_mcp;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

// Collects the reasons a criterion failed.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream s;
      s << what << ": got " << got << ", want " << want;
      failures.push_back(s.str());
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream s;
      s << what << ": got " << got << ", want " << want << " +/- " << tol;
      failures.push_back(s.str());
    }
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::unique_ptr<tools::ToolRegistry> shipped_registry(std::shared_ptr<const api::DracorClient> client) {
  auto r = std::make_unique<tools::ToolRegistry>();
  tools::register_dracor_tools(*r, std::move(client));
  return r;
}

std::string normalize_timestamps(const std::string& s) {
  static const std::regex iso(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2}))");
  return std::regex_replace(s, iso, "<timestamp>");
}

std::string run_binary(const std::string& args, const std::filesystem::path& input) {
  const std::string cmd = "'" + test_support::binary().string() + "' " + args + " < '" + input.string() + "'";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot start " + cmd);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = ::pclose(p);
  if (status != 0) throw std::runtime_error("server exited with status " + std::to_string(status));
  return out;
}

void golden_session(Check& c) {
  const auto data = test_support::source_dir() / "tests" / "data";
  const auto start = Clock::now();
  const std::string out = run_binary("--fixtures '" + test_support::fixtures_dir().string() + "' serve", data / "golden_session.in");
  const double elapsed = seconds_since(start);
  const std::string want = test_support::read_file(data / "golden_session.out");
  c.expect(!want.empty(), "golden transcript present");
  c.expect(normalize_timestamps(out) == normalize_timestamps(want), "stdout matches golden transcript byte for byte");
  std::istringstream lines(out);
  std::string line;
  int replies = 0;
  while (std::getline(lines, line)) {
    ++replies;
    c.expect(json::parse(line).value("jsonrpc", "") == "2.0", "reply is JSON-RPC 2.0");
  }
  c.equal(replies, 5, "replies (initialize, tools/list, 3 tools/call)");
  c.expect(elapsed < 1.0, "session runtime " + std::to_string(elapsed) + " s < 1 s");
}

void reported_values(Check& c) {
  const auto start = Clock::now();
  const auto client = test_support::fixture_client();
  c.equal(oracle::character_count(client->fetch_play_characters("ger", "buechner-dantons-tod")), 103u, "Dantons Tod characters");
  c.equal(client->fetch_play_metadata("ger", "gengenbach-der-nollhart").network_size.value_or(-1), 14, "Der Nollhart network size");
  const auto corpora = client->fetch_corpora();
  auto fre = std::find_if(corpora.begin(), corpora.end(), [](const auto& s) { return s.name == "fre"; });
  c.expect(fre != corpora.end(), "fre corpus listed");
  if (fre != corpora.end()) c.near(oracle::mean_characters_from_summary(*fre), 9.19, 0.005, "fre mean characters");
  const auto best = oracle::highest_mean_corpus(corpora);
  c.equal(best.corpus, std::string("gersh"), "highest mean corpus");
  c.near(best.mean, 39.39, 0.005, "gersh mean characters");
  c.equal(oracle::year_span(client->fetch_corpus("fre").plays).span, 847, "fre year span");
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s < 5 s");
}

void complexity(Check& c) {
  c.near(oracle::complexity_score(40, 323), 231.11, 0.01, "complexity(40, 323)");
  c.near(oracle::complexity_score(91, 2010), 692.14, 0.01, "complexity(91, 2010)");
}

void size_guard(Check& c) {
  const std::string at(tools::kDefaultMaxChars, 'a');
  const std::string helper = "get_corpus_metadata_paged_helper";
  c.expect(!tools::guard_response(at, tools::kDefaultMaxChars, helper).is_error, "1,048,576 characters pass");
  const auto over = tools::guard_response(at + "a", tools::kDefaultMaxChars, helper);
  c.expect(over.is_error, "1,048,577 characters fail");
  c.expect(over.text.find("exceeded maximum length") != std::string::npos, "message says exceeded maximum length");
  c.expect(over.text.find(helper) != std::string::npos, "message names the paired helper");

  // Through the registry: the corpus metadata wrapper on a large corpus.
  const auto r = shipped_registry(test_support::fixture_client());
  const auto res = r->call("get_corpus_metadata", {{"corpus_name", "ger"}});
  c.expect(res.is_error && res.text.find(helper) != std::string::npos, "get_corpus_metadata(ger) points to the helper");
}

void pagination(Check& c) {
  const auto start = Clock::now();
  const auto client = test_support::fixture_client();
  for (const auto& corpus : client->fetch_corpora()) {
    const json all = api::to_json(client->fetch_corpus_metadata(corpus.name));
    for (std::int64_t per : {1, 7, 50}) {
      json joined = json::array();
      std::set<std::string> names;
      for (std::int64_t page = 1;; ++page) {
        const auto p = tools::paginate(all, per, page);
        if (p.items.empty()) break;
        c.expect(static_cast<std::int64_t>(p.items.size()) <= per, corpus.name + " page size");
        for (const auto& x : p.items) {
          joined.push_back(x);
          names.insert(x.at("name").get<std::string>());
        }
      }
      c.expect(joined == all, corpus.name + " pages of " + std::to_string(per) + " concatenate to the full list");
      c.expect(names.size() == joined.size(), corpus.name + " has no duplicates at " + std::to_string(per));
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s < 10 s");
}

void search_equivalence(Check& c) {
  const auto client = test_support::fixture_client();
  const auto r = shipped_registry(client);
  const std::vector<std::string> corpora = {"ger", "fre", "ita", "rus", "swe", "bash", "greek", "span"};
  std::mt19937 rng(7);
  for (int q = 0; q < 100; ++q) {
    const std::string corpus = corpora[rng() % corpora.size()];
    const auto plays = client->fetch_corpus(corpus).plays;
    const auto& source = plays[rng() % plays.size()];
    const bool by_title = (q % 2 == 0 && source.title) || source.authors.empty();
    const std::string hay = by_title ? source.title.value_or("a") : source.authors.front().name;
    // A whole word of the chosen field, lengths vary with the data.
    std::vector<std::string> words;
    std::istringstream ws(hay);
    for (std::string w; ws >> w;) words.push_back(w);
    const std::string query = words.empty() ? "a" : words[rng() % words.size()];
    const std::string folded = fold_for_search(query);

    std::vector<std::string> expected;
    for (const auto& p : plays) {
      bool hit = false;
      if (by_title) {
        hit = p.title && fold_for_search(*p.title).find(folded) != std::string::npos;
      } else {
        for (const auto& a : p.authors) hit = hit || fold_for_search(a.name).find(folded) != std::string::npos;
      }
      if (hit) expected.push_back(p.name);
    }
    const auto res = by_title ? r->call("get_plays_in_corpus_by_title_helper", {{"corpus_name", corpus}, {"title_query", query}})
                              : r->call("get_plays_in_corpus_by_author_helper", {{"corpus_name", corpus}, {"author_query", query}});
    if (res.is_error) {
      c.expect(false, "query '" + query + "' failed: " + res.text);
      continue;
    }
    std::vector<std::string> got;
    for (const auto& h : json::parse(res.text)) got.push_back(h.at("name").get<std::string>());
    c.expect(got == expected, corpus + " query '" + query + "' matches the brute-force scan");
  }
}

void table_reproduction(Check& c) {
  const auto start = Clock::now();
  const auto bundle = eval::load_bundle(test_support::bundle_dir() / "specs", test_support::bundle_dir() / "traces");
  const auto table = eval::aggregate(bundle.specs, bundle.runs);
  const std::map<std::string, std::string> want = {{"1-1", "1 1 4 5/5"}, {"1-4", "1 1 5 1/5"}, {"2-1", "1 1 3 2/5"},
                                                   {"3-1", "1 1 5 5/5"}, {"3-2", "0.5 0.5 3 2/5"}};
  for (const auto& [id, row] : want) {
    auto it = std::find_if(table.rows.begin(), table.rows.end(), [&](const auto& r) { return r.id == id; });
    if (it == table.rows.end() || !it->card) {
      c.expect(false, "row " + id + " scored");
      continue;
    }
    const auto& k = *it->card;
    c.equal(eval::format_score(k.correct_answer) + " " + eval::format_score(k.tool_correctness) + " " +
                std::to_string(k.efficiency) + " " + std::to_string(k.reliability.k) + "/" + std::to_string(k.reliability.n),
            row, "row " + id);
  }
  c.near(table.summary.mean_efficiency, 4.375, 1e-9, "mean efficiency");
  c.equal(table.summary.correct, 13u, "correct answers");
  c.equal(table.summary.reliable, 11u, "reliable experiments");
  c.equal(table.summary.scored, 16u, "scored experiments");
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 2.0, "runtime " + std::to_string(elapsed) + " s < 2 s");
}

void docstring_lint(Check& c) {
  const auto client = test_support::fixture_client();
  c.equal(tools::lint(*shipped_registry(client)).size(), 0u, "violations in shipped catalog");
  const auto base = shipped_registry(client);
  int mutated = 0;
  for (const auto* t : base->tools()) {
    if (!t->paired_tool) continue;
    ++mutated;
    auto r = shipped_registry(client);
    r->apply_catalog({{"tools", {{t->name, {{"guidance", "See the other tools."}}}}}});
    const auto v = tools::lint(*r);
    c.expect(v.size() == 1 && v[0].rule == "pairing-symmetry" && v[0].tool == t->name,
             "removing the cross reference of " + t->name + " gives exactly one symmetry violation (got " +
                 std::to_string(v.size()) + ")");
  }
  c.expect(mutated > 0, "catalog has paired tools");
}

// Naive recomputations straight from the fixture JSON.
void oracle_brute_force(Check& c) {
  api::FixtureBackend raw(test_support::mini_fixtures_dir());
  auto body = [&](const std::string& target) { return json::parse(raw.get({target, "application/json"}).body); };
  const auto client = test_support::fixture_client(test_support::mini_fixtures_dir());

  const json listing = body("/corpora/mini");
  std::vector<std::int64_t> years;
  for (const auto& p : listing["plays"]) {
    if (p.contains("yearNormalized") && p["yearNormalized"].is_number()) years.push_back(p["yearNormalized"]);
  }
  const auto span = oracle::year_span(client->fetch_corpus("mini").plays);
  c.equal(span.span, *std::max_element(years.begin(), years.end()) - *std::min_element(years.begin(), years.end()), "year span");

  const json summary = body("/corpora?include=metrics")[0];
  const double mean = std::round(summary["metrics"]["characters"].get<double>() / summary["metrics"]["plays"].get<double>() * 100) / 100;
  c.near(oracle::mean_characters_from_summary(client->fetch_corpora()[0]), mean, 1e-12, "mean characters");
  c.equal(oracle::highest_mean_corpus(client->fetch_corpora()).corpus, std::string("mini"), "highest mean corpus");

  for (const auto& p : listing["plays"]) {
    const std::string play = p["name"];
    const std::string base = "/corpora/mini/plays/" + play;
    const json chars = body(base + "/characters");
    const auto typed = client->fetch_play_characters("mini", play);
    c.equal(oracle::character_count(typed), chars.size(), play + " character count");

    const json metrics = body(base + "/metrics");
    const double n = metrics["size"].get<double>();
    const double e = metrics["numEdges"].get<double>();
    c.near(oracle::complexity_score(metrics["size"], metrics["numEdges"]), e < 2 ? 0.0 : n * std::log(e), 1e-12,
           play + " complexity");

    int f = 0, m = 0;
    for (const auto& ch : chars) {
      f += ch.value("gender", "") == "FEMALE";
      m += ch.value("gender", "") == "MALE";
    }
    if (f + m > 0) c.near(oracle::female_share_of_play(typed), double(f) / (f + m), 1e-12, play + " female share");

    // Rank with ties averaged, by counting larger and equal values.
    std::map<std::string, double> composite;
    for (const char* metric : {"numOfWords", "numOfSpeechActs", "numOfScenes", "degree"}) {
      for (const auto& a : chars) {
        int larger = 0, equal = 0;
        for (const auto& b : chars) {
          larger += b.value(metric, 0) > a.value(metric, 0);
          equal += b.value(metric, 0) == a.value(metric, 0);
        }
        composite[a["id"]] += (larger + 1 + larger + equal) / 2.0 / 4.0;
      }
    }
    std::vector<std::pair<double, std::string>> expected;
    for (const auto& [id, v] : composite) expected.emplace_back(v, id);
    std::sort(expected.begin(), expected.end());
    const auto ranked = oracle::dominance_ranking(typed);
    bool same = ranked.size() == expected.size();
    for (std::size_t i = 0; same && i < ranked.size(); ++i) {
      same = ranked[i].id == expected[i].second && std::abs(ranked[i].composite_rank - expected[i].first) < 1e-12;
    }
    c.expect(same, play + " dominance ranking");
  }

  std::map<std::int64_t, std::pair<double, int>> bins;
  for (const auto& row : body("/corpora/mini/metadata")) {
    if (!row.contains("yearNormalized") || !row["yearNormalized"].is_number()) continue;
    const double f = row.value("numOfSpeakersFemale", 0), m = row.value("numOfSpeakersMale", 0);
    if (f + m == 0) continue;
    auto& b = bins[row["yearNormalized"].get<std::int64_t>() / 10 * 10];
    b.first += f / (f + m);
    b.second += 1;
  }
  const auto series = oracle::female_share_series(oracle::play_shares_from_metadata(client->fetch_corpus_metadata("mini")));
  c.equal(series.size(), bins.size(), "female share bins");
  std::size_t i = 0;
  for (const auto& [start, acc] : bins) {
    if (i >= series.size()) break;
    c.equal(series[i].period_start, start, "bin start");
    c.near(series[i].mean_female_share, acc.first / acc.second, 1e-12, "bin " + std::to_string(start) + " mean");
    ++i;
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"protocol golden session", golden_session},
      {"fixture-pinned reported values", reported_values},
      {"complexity score", complexity},
      {"size guard boundary", size_guard},
      {"pagination partition", pagination},
      {"search equivalence", search_equivalence},
      {"results table reproduction", table_reproduction},
      {"docstring lint", docstring_lint},
      {"oracle vs brute force", oracle_brute_force},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.failures.empty() ? "PASS" : "FAIL") << " " << n << " " << name;
    if (!c.failures.empty()) {
      ++failed;
      std::cout << ": " << c.failures.front();
      if (c.failures.size() > 1) std::cout << " (+" << c.failures.size() - 1 << " more)";
    }
    std::cout << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
