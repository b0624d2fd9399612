#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "app.hpp"
#include "test_support.hpp"

using namespace dracor_mcp::app;
using json = nlohmann::json;

namespace {

EnvLookup env_of(std::map<std::string, std::string> vars) {
  return [vars = std::move(vars)](const std::string& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "", std::map<std::string, std::string> env = {}) {
  args.insert(args.begin(), "dracor-mcp");
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = run_main(args, env_of(std::move(env)), Streams{in, out, err});
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixtures() { return test_support::fixtures_dir().string(); }

}  // namespace

TEST(Config, FlagsWinOverEnvironment) {
  AppConfig c;
  apply_env(c, false, false, env_of({{"DRACOR_API_BASE_URL", "https://staging.example/api/v1"}, {"DRACOR_FIXTURES_DIR", "/f"}}));
  EXPECT_EQ(c.base_url, "https://staging.example/api/v1");
  EXPECT_EQ(c.fixtures_dir, std::filesystem::path("/f"));

  AppConfig d;
  d.base_url = "https://flag.example";
  apply_env(d, true, true, env_of({{"DRACOR_API_BASE_URL", "https://env.example"}, {"DRACOR_FIXTURES_DIR", "/f"}}));
  EXPECT_EQ(d.base_url, "https://flag.example");
  EXPECT_FALSE(d.fixtures_dir);

  AppConfig e;
  apply_env(e, false, false, env_of({}));
  EXPECT_EQ(e.base_url, "https://dracor.org/api/v1");
}

TEST(Cli, LintIsClean) {
  const auto r = run({"--fixtures", fixtures(), "lint-docstrings"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("20 tools, 0 violations"), std::string::npos);
}

TEST(Cli, CatalogOverrideCanBreakLint) {
  test_support::TempDir dir;
  const auto path = dir.path() / "catalog.json";
  std::ofstream(path) << R"({"tools":{"get_corpus":{"guidance":"Nothing to add."}}})";
  const auto r = run({"--fixtures", fixtures(), "--catalog", path.string(), "lint-docstrings"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("pairing-symmetry: get_corpus"), std::string::npos);
  EXPECT_NE(r.err.find("1 violations"), std::string::npos);

  std::ofstream(path) << R"({"tools":{"no_such_tool":{"summary":"x"}}})";
  EXPECT_EQ(run({"--fixtures", fixtures(), "--catalog", path.string(), "lint-docstrings"}).code, 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"--no-such-flag", "serve"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"eval", "score", "--specs", "/nonexistent", "--traces", "/nonexistent"}).code, 2);
  EXPECT_EQ(run({"--max-response-chars", "0", "serve"}).code, 2);
  EXPECT_EQ(run({"--log-level", "loud", "serve"}).code, 2);
  EXPECT_EQ(run({"--fixtures", fixtures(), "oracle", "year-span"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, EvalScoreWritesTableAndSummary) {
  const std::string specs = (test_support::bundle_dir() / "specs").string();
  const std::string traces = (test_support::bundle_dir() / "traces").string();
  auto r = run({"eval", "score", "--specs", specs, "--traces", traces});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("| ID", 0), 0u);
  EXPECT_NE(r.out.find("mean efficiency 4.375"), std::string::npos);

  test_support::TempDir dir;
  const auto md = dir.path() / "table.md";
  const auto csv = dir.path() / "table.csv";
  r = run({"eval", "score", "--specs", specs, "--traces", traces, "--out", md.string(), "--csv", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("Summary: 16 experiments", 0), 0u);
  EXPECT_NE(test_support::read_file(md).find("| 4-1 "), std::string::npos);
  EXPECT_EQ(test_support::read_file(csv).rfind("id,prompt,", 0), 0u);
}

TEST(Cli, StrictFailsOnMissingExperiments) {
  test_support::TempDir specs, traces;
  std::filesystem::copy_file(test_support::bundle_dir() / "specs" / "1-1.json", specs.path() / "1-1.json");
  EXPECT_EQ(run({"eval", "score", "--specs", specs.path().string(), "--traces", traces.path().string()}).code, 0);
  EXPECT_EQ(run({"eval", "score", "--strict", "--specs", specs.path().string(), "--traces", traces.path().string()}).code, 1);
}

TEST(Cli, OracleQueries) {
  auto r = run({"oracle", "complexity", "--size", "40", "--edges", "323"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["complexity_score"], 231.11);
  r = run({"--fixtures", fixtures(), "oracle", "dominance", "--corpus", "ger", "--play", "lessing-emilia-galotti"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(json::parse(r.out)["ranking"].empty());
  r = run({"oracle", "year-span", "--corpus", "mini"}, "", {{"DRACOR_FIXTURES_DIR", test_support::mini_fixtures_dir().string()}});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GT(json::parse(r.out)["span"].get<int>(), 0);
}

TEST(Cli, ServeSpeaksJsonRpcOnStdout) {
  const std::string input =
      R"({"jsonrpc":"2.0","id":1,"method":"initialize","params":{"protocolVersion":"2024-11-05","capabilities":{},"clientInfo":{"name":"t","version":"1"}}})"
      "\n"
      R"({"jsonrpc":"2.0","method":"notifications/initialized"})"
      "\n"
      R"({"jsonrpc":"2.0","id":2,"method":"tools/list"})"
      "\n"
      R"({"jsonrpc":"2.0","id":3,"method":"tools/call","params":{"name":"get_corpus_metadata","arguments":{"corpus_name":"ger"}}})"
      "\n"
      R"({"jsonrpc":"2.0","id":4,"method":"resources/read","params":{"uri":"dracor://corpora/registry"}})"
      "\n"
      "not json\n";
  const auto r = run({"--fixtures", fixtures(), "--log-level", "debug", "serve"}, input);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<json> replies;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    EXPECT_EQ(j["jsonrpc"], "2.0");
    replies.push_back(j);
  }
  ASSERT_EQ(replies.size(), 5u);
  EXPECT_EQ(replies[1]["result"]["tools"].size(), 20u);
  EXPECT_TRUE(replies[2]["result"]["isError"].get<bool>());
  EXPECT_EQ(replies[3]["result"]["contents"][0]["mimeType"], "application/json");
  EXPECT_EQ(replies[4]["error"]["code"], -32700);
  EXPECT_NE(r.err.find("[info] backend: "), std::string::npos);
}

TEST(Cli, FixtureRecordingFromSnapshot) {
  test_support::TempDir dir;
  const auto plan = dir.path() / "plan.txt";
  std::ofstream(plan) << "# mini corpus\n/corpora/mini\n/corpora/mini/metadata\n";
  const auto out = dir.path() / "out";
  const auto r = run({"--fixtures", test_support::mini_fixtures_dir().string(), "fixtures", "record", "--plan", plan.string(),
                      "--out", out.string(), "--recorded-at", "2026-01-01T00:00:00Z"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("recorded 2 of 2"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out / "manifest.json"));
}
