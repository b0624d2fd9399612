#include <gtest/gtest.h>

#include <fstream>
#include <map>

#include "dracor_mcp/fixture_backend.hpp"
#include "test_support.hpp"

using namespace dracor_mcp::api;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

class MapBackend : public Backend {
 public:
  std::map<std::string, Response> routes;
  mutable std::vector<Request> seen;
  Response get(const Request& r) const override {
    seen.push_back(r);
    auto it = routes.find(r.target);
    if (it == routes.end()) throw ClientError(ErrorKind::Transport, r.target, "connection refused");
    return it->second;
  }
  std::string describe() const override { return "map"; }
};

}  // namespace

TEST(FixtureKey, EncodesPathAndHashesQuery) {
  EXPECT_EQ(percent_encode("a-b_c.d~e/f g"), "a-b_c.d~e%2Ff%20g");
  EXPECT_EQ(percent_encode("ü"), "%C3%BC");
  EXPECT_EQ(fixture_key("/corpora/ger"), "%2Fcorpora%2Fger.json");
  EXPECT_EQ(fixture_key("corpora/ger"), "%2Fcorpora%2Fger.json");
  char buf[32];
  std::snprintf(buf, sizeof buf, "__%016llx", static_cast<unsigned long long>(fnv1a64("include=metrics")));
  EXPECT_EQ(fixture_key("/corpora?include=metrics"), std::string("%2Fcorpora") + buf + ".json");
  EXPECT_EQ(fixture_key("https://example.org/a.json"), percent_encode("example.org/a.json") + ".json");
  EXPECT_NE(fixture_key("/x?a=1"), fixture_key("/x?a=2"));
}

TEST(FixtureKey, HashAndDigestMatchPublishedVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(FixtureBackend, ShippedSnapshotIsConsistent) {
  FixtureBackend b(test_support::fixtures_dir());
  ASSERT_TRUE(b.loaded()) << b.describe();
  EXPECT_EQ(b.manifest().format_version, 1);
  for (const auto& e : b.manifest().entries) {
    ASSERT_TRUE(e.error.empty()) << e.target;
    EXPECT_EQ(e.file, fixture_key(e.target));
    const auto body = b.get({e.target, ""}).body;
    EXPECT_EQ(body.size(), e.bytes) << e.target;
    EXPECT_EQ(sha256_hex(body), e.sha256) << e.target;
  }
}

TEST(FixtureBackend, UnrecordedTargetIsNotFoundWithHint) {
  FixtureBackend b(test_support::fixtures_dir());
  try {
    b.get({"/corpora/nope", "application/json"});
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
    EXPECT_NE(std::string(e.what()).find("fixtures record"), std::string::npos);
  }
}

TEST(FixtureBackend, MissingManifestFailsEveryRequest) {
  test_support::TempDir dir;
  FixtureBackend b(dir.path());
  EXPECT_FALSE(b.loaded());
  try {
    b.get({"/corpora", ""});
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Transport);
  }
}

TEST(FixtureBackend, RejectsUnknownFormatVersion) {
  test_support::TempDir dir;
  std::ofstream(dir.path() / "manifest.json") << R"({"format_version":2,"base_url":"x","entries":[]})";
  FixtureBackend b(dir.path());
  EXPECT_FALSE(b.loaded());
}

TEST(Recorder, AcceptHeaderFollowsEndpoint) {
  EXPECT_EQ(accept_for("/corpora/ger"), "application/json");
  EXPECT_EQ(accept_for("/corpora/ger/plays/p/spoken-text?gender=MALE"), "text/plain");
  EXPECT_EQ(accept_for("/corpora/ger/plays/p/stage-directions"), "text/plain");
  EXPECT_EQ(accept_for("/corpora/ger/plays/p/networkdata/csv"), "text/csv");
  EXPECT_EQ(accept_for("/corpora/ger/plays/p/tei"), "application/xml");
  EXPECT_EQ(accept_for("/openapi.yaml"), "application/yaml");
}

TEST(RequestPlan, SkipsCommentsAndBlankLines) {
  EXPECT_EQ(parse_request_plan("# header\n/corpora\n\n  /info  \r\n#x\n/corpora/ger\n"),
            (std::vector<std::string>{"/corpora", "/info", "/corpora/ger"}));
}

TEST(Recorder, RecordsReplaysAndListsFailures) {
  MapBackend live;
  live.routes["/corpora"] = {200, R"([{"name":"ger"}])", "application/json"};
  live.routes["/corpora/ger/plays/p/spoken-text"] = {200, "Sprich, Mädchen!", "text/plain"};
  live.routes["/gone"] = {404, "nope", "text/plain"};
  test_support::TempDir dir;
  const auto result = record_fixtures(live, "https://example.org/api", {"/corpora", "/corpora/ger/plays/p/spoken-text", "/gone", "/down"},
                                      dir.path(), "2026-01-01T00:00:00Z");
  EXPECT_EQ(result.failures, 2u);
  EXPECT_EQ(live.seen[1].accept, "text/plain");
  ASSERT_EQ(result.manifest.entries.size(), 4u);

  FixtureBackend replay(dir.path());
  ASSERT_TRUE(replay.loaded()) << replay.describe();
  EXPECT_EQ(replay.manifest().base_url, "https://example.org/api");
  EXPECT_EQ(replay.get({"/corpora", ""}).body, R"([{"name":"ger"}])");
  EXPECT_EQ(replay.get({"/corpora/ger/plays/p/spoken-text", ""}).body, "Sprich, Mädchen!");
  EXPECT_EQ(replay.get({"/gone", ""}).status, 404);
  try {
    replay.get({"/down", ""});
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Transport);
  }
  EXPECT_FALSE(fs::exists(dir.path() / fixture_key("/down")));
}

TEST(Recorder, ReRecordingFromSnapshotIsByteIdentical) {
  FixtureBackend source(test_support::mini_fixtures_dir());
  ASSERT_TRUE(source.loaded());
  std::vector<std::string> plan;
  for (const auto& e : source.manifest().entries) plan.push_back(e.target);
  test_support::TempDir dir;
  const auto result = record_fixtures(source, source.manifest().base_url, plan, dir.path(), "2026-01-01T00:00:00Z");
  EXPECT_EQ(result.failures, 0u);
  for (const auto& e : source.manifest().entries) {
    EXPECT_EQ(test_support::read_file(dir.path() / e.file), test_support::read_file(test_support::mini_fixtures_dir() / e.file))
        << e.target;
  }
}
