#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "dracor_mcp/oracle.hpp"
#include "test_support.hpp"

using namespace dracor_mcp;
using namespace dracor_mcp::oracle;
using json = nlohmann::json;

namespace {

// Raw fixture bodies, read without the typed client.
json raw(const std::string& target) {
  api::FixtureBackend b(test_support::mini_fixtures_dir());
  return json::parse(b.get({target, "application/json"}).body);
}

std::vector<std::string> mini_plays() {
  std::vector<std::string> out;
  const json listing = raw("/corpora/mini");
  for (const auto& p : listing["plays"]) out.push_back(p["name"]);
  return out;
}

std::shared_ptr<const api::DracorClient> mini_client() {
  return test_support::fixture_client(test_support::mini_fixtures_dir());
}

api::CharacterRecord character(std::string id, api::Gender g, std::int64_t words, std::int64_t acts, std::int64_t scenes,
                               std::int64_t degree) {
  api::CharacterRecord c;
  c.id = std::move(id);
  c.gender = g;
  c.num_of_words = words;
  c.num_of_speech_acts = acts;
  c.num_of_scenes = scenes;
  c.degree = degree;
  return c;
}

}  // namespace

TEST(Oracle, Rounding) {
  EXPECT_DOUBLE_EQ(round_to(2.345, 2), 2.35);
  EXPECT_DOUBLE_EQ(round_to(-2.345, 2), -2.35);
  EXPECT_DOUBLE_EQ(round_to(0.125, 2), 0.13);
  EXPECT_DOUBLE_EQ(round_to(7.0, 0), 7.0);
}

TEST(Oracle, ComplexityMatchesReportedScores) {
  EXPECT_NEAR(round_to(complexity_score(40, 323), 2), 231.11, 1e-9);
  EXPECT_NEAR(round_to(complexity_score(91, 2010), 2), 692.14, 1e-9);
  EXPECT_EQ(complexity_score(5, 1), 0.0);
  EXPECT_EQ(complexity_score(5, 0), 0.0);
}

TEST(Oracle, ComplexityAgainstPlayMetrics) {
  const auto client = mini_client();
  for (const auto& play : mini_plays()) {
    const json m = raw("/corpora/mini/plays/" + play + "/metrics");
    const std::int64_t n = m["size"];
    const std::int64_t e = m["numEdges"];
    const auto metrics = client->fetch_play_metrics("mini", play);
    EXPECT_DOUBLE_EQ(complexity_score(metrics.network_size, metrics.edge_count), e < 2 ? 0.0 : n * std::log(double(e)))
        << play;
    std::string csv = api::FixtureBackend(test_support::mini_fixtures_dir())
                          .get({"/corpora/mini/plays/" + play + "/networkdata/csv", ""})
                          .body;
    EXPECT_EQ(static_cast<std::int64_t>(std::count(csv.begin(), csv.end(), '\n')) - 1, e) << play;
  }
}

TEST(Oracle, CharacterCountEqualsListLength) {
  const auto client = mini_client();
  for (const auto& play : mini_plays()) {
    EXPECT_EQ(character_count(client->fetch_play_characters("mini", play)),
              raw("/corpora/mini/plays/" + play + "/characters").size());
  }
}

TEST(Oracle, MeanCharactersFromSummary) {
  const auto corpora = mini_client()->fetch_corpora();
  ASSERT_EQ(corpora.size(), 1u);
  EXPECT_DOUBLE_EQ(mean_characters_from_summary(corpora[0]), 4.0);

  api::CorpusSummary a{"a", "A", 3, 10, {}};
  api::CorpusSummary b{"b", "B", 4, 13, {}};
  api::CorpusSummary c{"c", "C", 0, 0, {}};
  EXPECT_DOUBLE_EQ(mean_characters_from_summary(a), 3.33);
  const auto best = highest_mean_corpus({b, a, c});
  EXPECT_EQ(best.corpus, "a");
  EXPECT_DOUBLE_EQ(best.mean, 3.33);
  EXPECT_THROW(mean_characters_from_summary(c), OracleError);
  EXPECT_THROW(highest_mean_corpus({}), OracleError);

  api::CorpusSummary tie1{"z", "Z", 2, 8, {}};
  api::CorpusSummary tie2{"y", "Y", 1, 4, {}};
  EXPECT_EQ(highest_mean_corpus({tie1, tie2}).corpus, "y");
}

TEST(Oracle, YearSpanSkipsUndatedPlays) {
  std::int64_t lo = 1 << 30, hi = -(1 << 30);
  const json listing = raw("/corpora/mini");
  for (const auto& p : listing["plays"]) {
    if (!p.contains("yearNormalized") || p["yearNormalized"].is_null()) continue;
    lo = std::min<std::int64_t>(lo, p["yearNormalized"]);
    hi = std::max<std::int64_t>(hi, p["yearNormalized"]);
  }
  const auto span = year_span(mini_client()->fetch_corpus("mini").plays);
  EXPECT_EQ(span.min_year, lo);
  EXPECT_EQ(span.max_year, hi);
  EXPECT_EQ(span.span, hi - lo);
  EXPECT_THROW(year_span({}), OracleError);
}

TEST(Oracle, WidestSpanAcrossCorpora) {
  auto listing = [](std::string name, std::optional<std::int64_t> year) {
    api::PlayListing p;
    p.name = std::move(name);
    p.year_normalized = year;
    return p;
  };
  std::map<std::string, std::vector<api::PlayListing>> by_corpus{
      {"a", {listing("a1", 1700), listing("a2", 1750)}},
      {"b", {listing("b1", 1600), listing("b2", 1650)}},
      {"c", {listing("c1", std::nullopt)}},
      {"d", {listing("d1", 1800), listing("d2", 1820)}}};
  const auto best = widest_span_corpus(by_corpus);
  EXPECT_EQ(best.corpus, "a");
  EXPECT_EQ(best.span.span, 50);
  EXPECT_THROW(widest_span_corpus({{"c", {listing("c1", std::nullopt)}}}), OracleError);
}

TEST(Oracle, FemaleShareLeavesUnknownOut) {
  const auto client = mini_client();
  for (const auto& play : mini_plays()) {
    int f = 0, m = 0;
    for (const auto& ch : raw("/corpora/mini/plays/" + play + "/characters")) {
      if (ch.value("gender", "") == "FEMALE") ++f;
      if (ch.value("gender", "") == "MALE") ++m;
    }
    const auto chars = client->fetch_play_characters("mini", play);
    if (f + m == 0) {
      EXPECT_THROW(female_share_of_play(chars), OracleError);
    } else {
      EXPECT_DOUBLE_EQ(female_share_of_play(chars), double(f) / (f + m)) << play;
    }
  }
  EXPECT_FALSE(female_share_from_counts(0, 0));
  EXPECT_DOUBLE_EQ(*female_share_from_counts(1, 3), 0.25);
}

TEST(Oracle, SeriesBinsByDecadeFromMetadata) {
  // Brute force: per-play share from raw counts, then floor-decade mean.
  std::map<std::int64_t, std::vector<double>> bins;
  for (const auto& row : raw("/corpora/mini/metadata")) {
    if (!row.contains("yearNormalized") || row["yearNormalized"].is_null()) continue;
    const double f = row.value("numOfSpeakersFemale", 0);
    const double m = row.value("numOfSpeakersMale", 0);
    if (f + m == 0) continue;
    const std::int64_t y = row["yearNormalized"];
    bins[(y / 10) * 10].push_back(f / (f + m));
  }
  const auto shares = play_shares_from_metadata(mini_client()->fetch_corpus_metadata("mini"));
  const auto series = female_share_series(shares, 10);
  ASSERT_EQ(series.size(), bins.size());
  std::size_t i = 0;
  for (const auto& [start, values] : bins) {
    double sum = 0;
    for (double v : values) sum += v;
    EXPECT_EQ(series[i].period_start, start);
    EXPECT_EQ(series[i].period_end, start + 9);
    EXPECT_EQ(series[i].play_count, static_cast<std::int64_t>(values.size()));
    EXPECT_NEAR(series[i].mean_female_share, sum / values.size(), 1e-12);
    ++i;
  }
}

TEST(Oracle, SeriesPropertiesOnRandomInput) {
  std::mt19937 rng(5);
  for (int round = 0; round < 50; ++round) {
    std::vector<PlayShare> shares;
    const int n = 1 + rng() % 40;
    for (int i = 0; i < n; ++i) {
      shares.push_back({"p" + std::to_string(i), 1500 + std::int64_t(rng() % 500), (rng() % 1001) / 1000.0});
    }
    const std::int64_t width = 1 + rng() % 25;
    const auto series = female_share_series(shares, width);
    std::int64_t total = 0;
    for (std::size_t k = 0; k < series.size(); ++k) {
      total += series[k].play_count;
      EXPECT_GE(series[k].mean_female_share, 0.0);
      EXPECT_LE(series[k].mean_female_share, 1.0);
      EXPECT_EQ(series[k].period_start % width, 0);
      if (k) {
        EXPECT_LT(series[k - 1].period_start, series[k].period_start);
      }
    }
    EXPECT_EQ(total, n);
  }
  EXPECT_THROW(female_share_series({}, 0), std::invalid_argument);
}

TEST(Oracle, DominanceUsesFractionalRanks) {
  using api::Gender;
  const std::vector<api::CharacterRecord> chars = {
      character("a", Gender::Male, 100, 10, 5, 3),
      character("b", Gender::Female, 200, 10, 4, 2),
      character("c", Gender::Male, 50, 1, 1, 1),
  };
  // words a2 b1 c3; acts a1.5 b1.5 c3; scenes a1 b2 c3; degree a1 b2 c3
  const auto ranked = dominance_ranking(chars);
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].id, "a");
  EXPECT_DOUBLE_EQ(ranked[0].composite_rank, (2 + 1.5 + 1 + 1) / 4.0);
  EXPECT_EQ(ranked[1].id, "b");
  EXPECT_DOUBLE_EQ(ranked[1].composite_rank, (1 + 1.5 + 2 + 2) / 4.0);
  EXPECT_DOUBLE_EQ(ranked[2].composite_rank, 3.0);
}

TEST(Oracle, DominanceOnFixturePlaysIsAPermutation) {
  const auto client = mini_client();
  for (const auto& play : mini_plays()) {
    const auto chars = client->fetch_play_characters("mini", play);
    const auto ranked = dominance_ranking(chars);
    ASSERT_EQ(ranked.size(), chars.size());
    double sum = 0;
    for (const auto& r : ranked) sum += r.composite_rank;
    const double n = static_cast<double>(chars.size());
    EXPECT_NEAR(sum, n * (n + 1) / 2, 1e-9) << play;
  }
}
