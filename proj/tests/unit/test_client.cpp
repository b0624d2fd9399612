#include <gtest/gtest.h>

#include <map>
#include <mutex>

#include "dracor_mcp/dracor_client.hpp"
#include "test_support.hpp"

using namespace dracor_mcp::api;
using json = nlohmann::json;

namespace {

class MapBackend : public Backend {
 public:
  std::map<std::string, Response> routes;
  mutable std::vector<Request> seen;

  Response get(const Request& r) const override {
    seen.push_back(r);
    auto it = routes.find(r.target);
    if (it == routes.end()) return {404, "not found", "text/plain"};
    return it->second;
  }
  std::string describe() const override { return "map"; }
};

std::shared_ptr<MapBackend> backend_with(std::string target, std::string body, int status = 200) {
  auto b = std::make_shared<MapBackend>();
  b->routes[std::move(target)] = {status, std::move(body), "application/json"};
  return b;
}

}  // namespace

TEST(Parsers, CorpusSummaryReadsMetricsAndKeepsUnknownFields) {
  const json j = json::parse(R"({"name":"ger","title":"German Drama Corpus","acronym":"GerDraCor",
                                 "metrics":{"plays":737,"characters":10000,"wordCount":{"text":1}}})");
  const auto s = parse_corpus_summary(j, "/corpora");
  EXPECT_EQ(s.name, "ger");
  EXPECT_EQ(s.num_of_plays, 737);
  EXPECT_EQ(s.num_of_characters, 10000);
  EXPECT_EQ(s.extra.at("acronym"), "GerDraCor");
  EXPECT_EQ(to_json(s), j);
}

TEST(Parsers, CorpusSummaryWithoutMetricsIsDecodeError) {
  try {
    parse_corpus_summary(json::parse(R"({"name":"ger","title":"x"})"), "/corpora");
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Decode);
    EXPECT_EQ(e.target(), "/corpora");
  }
}

TEST(Parsers, PlayListingRoundTripsIncludingEmptyAuthors) {
  for (const char* text : {
           R"({"name":"a","title":"T","authors":[{"name":"Büchner, Georg","gender":"MALE","key":"w:Q1"}],"yearNormalized":1835,"networkSize":103,"x":[1]})",
           R"({"name":"b","authors":[],"yearNormalized":null})",
           R"({"name":"c"})",
       }) {
    const json j = json::parse(text);
    EXPECT_EQ(to_json(parse_play_listing(j, "/t")), j) << text;
  }
}

TEST(Parsers, MetadataRowAndCharacter) {
  const json row = json::parse(
      R"({"name":"p","title":"T","firstAuthor":"A","yearNormalized":1800,"size":12,"numOfSpeakersFemale":3,"numOfSpeakersMale":8,"numOfSpeakersUnknown":1,"wordCount":5})");
  const auto r = parse_metadata_row(row, "/m");
  EXPECT_EQ(r.network_size, 12);
  EXPECT_EQ(r.num_female, 3);
  EXPECT_EQ(r.num_male, 8);
  EXPECT_EQ(r.num_unknown, 1);
  EXPECT_EQ(to_json(r), row);

  const json ch = json::parse(
      R"({"id":"emilia","name":"Emilia","gender":"FEMALE","numOfWords":100,"numOfSpeechActs":4,"numOfScenes":3,"degree":2,"isGroup":false})");
  const auto c = parse_character(ch, "/c");
  EXPECT_EQ(c.gender, Gender::Female);
  EXPECT_EQ(c.num_of_words, 100);
  EXPECT_EQ(to_json(c), ch);
  EXPECT_THROW(parse_character(json::parse(R"({"id":"x","numOfWords":-1})"), "/c"), ClientError);
}

TEST(Parsers, PlayMetricsValidatesDensity) {
  const json ok = json::parse(R"({"size":40,"numEdges":323,"density":0.414103,"averageDegree":16.15,"maxDegree":30})");
  const auto m = parse_play_metrics(ok, "/m");
  EXPECT_EQ(m.network_size, 40);
  EXPECT_EQ(m.edge_count, 323);
  EXPECT_EQ(to_json(m), ok);
  EXPECT_THROW(parse_play_metrics(json::parse(R"({"size":4,"numEdges":3,"density":1.5,"averageDegree":1})"), "/m"),
               ClientError);
  EXPECT_THROW(parse_play_metrics(json::parse(R"({"size":4})"), "/m"), ClientError);
}

TEST(Parsers, NetworkCsv) {
  const auto edges = parse_network_csv("Source,Type,Target,Weight\nA,Undirected,B,3\nB,Undirected,C,1\n", "/n");
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0], (NetworkEdge{"A", "B", "Undirected", 3.0}));
  EXPECT_TRUE(parse_network_csv("", "/n").empty());
  EXPECT_THROW(parse_network_csv("A,Undirected\n", "/n"), ClientError);
  EXPECT_THROW(parse_network_csv("A,Undirected,B,heavy\n", "/n"), ClientError);
}

TEST(Parsers, GenderNames) {
  EXPECT_EQ(parse_gender("FEMALE"), Gender::Female);
  EXPECT_EQ(parse_gender("MALE"), Gender::Male);
  EXPECT_EQ(parse_gender("UNKNOWN"), Gender::Unknown);
  EXPECT_FALSE(parse_gender("female"));
  EXPECT_EQ(to_string(Gender::Female), "FEMALE");
}

TEST(Client, BuildsEncodedPaths) {
  EXPECT_EQ(DracorClient::corpus_path("ger"), "/corpora/ger");
  EXPECT_EQ(DracorClient::play_path("ger", "a b/c"), "/corpora/ger/plays/a%20b%2Fc");
}

TEST(Client, MapsStatusesToErrorKinds) {
  auto b = backend_with("/info", "{}", 503);
  b->routes["/corpora/ger"] = {200, "not json", "application/json"};
  DracorClient client(b);
  try {
    client.fetch_api_info();
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Transport);
  }
  try {
    client.fetch_corpus("ger");
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Decode);
  }
  try {
    client.fetch_play_metrics("ger", "missing");
    FAIL();
  } catch (const ClientError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
    EXPECT_EQ(e.target(), "/corpora/ger/plays/missing/metrics");
    EXPECT_NE(std::string(e.what()).find("/corpora/ger/plays/missing/metrics"), std::string::npos);
  }
}

TEST(Client, SendsAcceptHeadersPerEndpoint) {
  auto b = std::make_shared<MapBackend>();
  b->routes["/corpora/g/plays/p/spoken-text?gender=FEMALE"] = {200, "text", "text/plain"};
  b->routes["/corpora/g/plays/p/networkdata/csv"] = {200, "A,Undirected,B,1\n", "text/csv"};
  b->routes["/corpora/g/plays/p/tei"] = {200, "<TEI/>", "application/xml"};
  DracorClient client(b);
  EXPECT_EQ(client.fetch_spoken_text("g", "p", Gender::Female), "text");
  EXPECT_EQ(client.fetch_network_data("g", "p").size(), 1u);
  EXPECT_EQ(client.fetch_tei("g", "p"), "<TEI/>");
  ASSERT_EQ(b->seen.size(), 3u);
  EXPECT_EQ(b->seen[0].accept, "text/plain");
  EXPECT_EQ(b->seen[1].accept, "text/csv");
  EXPECT_EQ(b->seen[2].accept, "application/xml");
}

TEST(Client, RejectsWrongTopLevelShapes) {
  DracorClient client(backend_with("/corpora?include=metrics", "{}"));
  EXPECT_THROW(client.fetch_corpora(), ClientError);
}

TEST(Client, ReadsPinnedFixtureValues) {
  const auto client = test_support::fixture_client();
  EXPECT_EQ(client->fetch_corpora().size(), 26u);
  EXPECT_EQ(client->fetch_play_characters("ger", "buechner-dantons-tod").size(), 103u);
  EXPECT_EQ(client->fetch_play_metadata("ger", "gengenbach-der-nollhart").network_size, 14);
  const auto m = client->fetch_play_metrics("ger", "birch-pfeiffer-pfeffer-roesel");
  EXPECT_EQ(m.network_size, 40);
  EXPECT_EQ(m.edge_count, 323);
  const auto edges = client->fetch_network_data("ger", "birch-pfeiffer-pfeffer-roesel");
  EXPECT_EQ(edges.size(), 323u);
}

TEST(Client, FixturePayloadsRoundTripThroughTypedViews) {
  const auto client = test_support::fixture_client();
  dracor_mcp::api::FixtureBackend raw(test_support::fixtures_dir());
  for (const char* corpus : {"bash", "tat", "yid", "swe"}) {
    const std::string target = DracorClient::corpus_path(corpus) + "/metadata";
    const json original = json::parse(raw.get({target, "application/json"}).body);
    EXPECT_EQ(to_json(client->fetch_corpus_metadata(corpus)), original) << corpus;
    const std::string listing = DracorClient::corpus_path(corpus);
    EXPECT_EQ(to_json(client->fetch_corpus(corpus)), json::parse(raw.get({listing, "application/json"}).body)) << corpus;
  }
}
