#include "dracor_mcp/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dracor_mcp::oracle {

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The epsilon nudges values like 9.185 (stored as 9.18499...) to the side a reader expects.
  const double scaled = value * scale;
  return std::round(scaled + (scaled >= 0 ? 1e-9 : -1e-9)) / scale;
}

double complexity_score(std::int64_t network_size, std::int64_t edge_count) {
  if (network_size < 0 || edge_count < 0) throw OracleError("complexity score needs non-negative counts");
  if (edge_count < 2) return 0.0;
  return static_cast<double>(network_size) * std::log(static_cast<double>(edge_count));
}

std::size_t character_count(const std::vector<api::CharacterRecord>& characters) { return characters.size(); }

namespace {

double raw_mean(const api::CorpusSummary& s) {
  if (s.num_of_plays <= 0) throw OracleError("corpus " + s.name + " has no plays");
  return static_cast<double>(s.num_of_characters) / static_cast<double>(s.num_of_plays);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

double mean_characters_from_summary(const api::CorpusSummary& summary) { return round_to(raw_mean(summary), 2); }

CorpusMean highest_mean_corpus(const std::vector<api::CorpusSummary>& summaries) {
  const api::CorpusSummary* best = nullptr;
  double best_mean = 0.0;
  for (const auto& s : summaries) {
    if (s.num_of_plays <= 0) continue;
    const double m = raw_mean(s);
    if (!best || m > best_mean || (m == best_mean && s.name < best->name)) {
      best = &s;
      best_mean = m;
    }
  }
  if (!best) throw OracleError("no corpus with plays");
  return {best->name, round_to(best_mean, 2)};
}

YearSpan year_span(const std::vector<api::PlayListing>& plays) {
  std::optional<YearSpan> out;
  for (const auto& p : plays) {
    if (!p.year_normalized) continue;
    const auto y = *p.year_normalized;
    if (!out) {
      out = YearSpan{y, y, 0};
    } else {
      out->min_year = std::min(out->min_year, y);
      out->max_year = std::max(out->max_year, y);
    }
  }
  if (!out) throw OracleError("no play has a normalized year");
  out->span = out->max_year - out->min_year;
  return *out;
}

CorpusSpan widest_span_corpus(const std::map<std::string, std::vector<api::PlayListing>>& plays_by_corpus) {
  std::optional<CorpusSpan> best;
  for (const auto& [name, plays] : plays_by_corpus) {
    const bool dated = std::any_of(plays.begin(), plays.end(), [](const auto& p) { return p.year_normalized.has_value(); });
    if (!dated) continue;
    const YearSpan s = year_span(plays);
    if (!best || s.span > best->span.span) best = CorpusSpan{name, s};
  }
  if (!best) throw OracleError("no corpus has dated plays");
  return *best;
}

std::optional<double> female_share_from_counts(std::int64_t female, std::int64_t male) {
  if (female < 0 || male < 0) throw OracleError("negative gender count");
  if (female + male == 0) return std::nullopt;
  return static_cast<double>(female) / static_cast<double>(female + male);
}

double female_share_of_play(const std::vector<api::CharacterRecord>& characters) {
  std::int64_t female = 0;
  std::int64_t male = 0;
  for (const auto& c : characters) {
    if (c.gender == api::Gender::Female) ++female;
    if (c.gender == api::Gender::Male) ++male;
  }
  auto share = female_share_from_counts(female, male);
  if (!share) throw OracleError("no character with known gender");
  return *share;
}

std::vector<PlayShare> play_shares_from_metadata(const std::vector<api::MetadataRow>& rows) {
  std::vector<PlayShare> out;
  for (const auto& r : rows) {
    if (!r.year_normalized) continue;
    auto share = female_share_from_counts(r.num_female.value_or(0), r.num_male.value_or(0));
    if (!share) continue;
    out.push_back({r.name, *r.year_normalized, *share});
  }
  return out;
}

std::vector<ShareBin> female_share_series(const std::vector<PlayShare>& shares, std::int64_t bin_width) {
  if (bin_width < 1) throw OracleError("bin width must be positive");
  if (shares.empty()) throw OracleError("no play with a year and a share");
  std::map<std::int64_t, std::pair<double, std::int64_t>> acc;
  for (const auto& s : shares) {
    if (s.share < 0.0 || s.share > 1.0) throw OracleError("share of " + s.play + " outside [0,1]");
    auto& [sum, n] = acc[floor_div(s.year, bin_width) * bin_width];
    sum += s.share;
    ++n;
  }
  std::vector<ShareBin> out;
  for (const auto& [start, v] : acc) {
    out.push_back({start, start + bin_width - 1, v.first / static_cast<double>(v.second), v.second});
  }
  return out;
}

std::vector<RankedCharacter> dominance_ranking(const std::vector<api::CharacterRecord>& characters) {
  const auto n = characters.size();
  std::vector<std::array<std::int64_t, 4>> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = characters[i];
    values[i] = {c.num_of_words.value_or(0), c.num_of_speech_acts.value_or(0), c.num_of_scenes.value_or(0),
                 c.degree.value_or(0)};
  }
  std::vector<RankedCharacter> out(n);
  for (std::size_t m = 0; m < 4; ++m) {
    std::vector<std::int64_t> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = values[i][m];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = values[i][m];
      const auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
      const auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
      const double greater = static_cast<double>(sorted.end() - hi);
      const double ties = static_cast<double>(hi - lo);
      out[i].composite_rank += 1.0 + greater + (ties - 1.0) / 2.0;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i].id = characters[i].id;
    out[i].composite_rank /= 4.0;
  }
  std::sort(out.begin(), out.end(), [](const RankedCharacter& a, const RankedCharacter& b) {
    if (a.composite_rank != b.composite_rank) return a.composite_rank < b.composite_rank;
    return a.id < b.id;
  });
  return out;
}

}  // namespace dracor_mcp::oracle
