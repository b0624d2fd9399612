// Reference computations for the experiment answer keys.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dracor_mcp/dracor_client.hpp"

namespace dracor_mcp::oracle {

// Raised when an input leaves the quantity undefined (no plays, no dated plays, ...).
class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Half away from zero, as used for the reported figures.
double round_to(double value, int decimals);

// network_size * ln(edge_count); 0 when edge_count < 2.
double complexity_score(std::int64_t network_size, std::int64_t edge_count);

std::size_t character_count(const std::vector<api::CharacterRecord>& characters);

// num_of_characters / num_of_plays rounded to two decimals.
double mean_characters_from_summary(const api::CorpusSummary& summary);

struct CorpusMean {
  std::string corpus;
  double mean = 0.0;  // rounded to two decimals
};

// Compares unrounded means; equal means go to the lexicographically first name.
CorpusMean highest_mean_corpus(const std::vector<api::CorpusSummary>& summaries);

struct YearSpan {
  std::int64_t min_year = 0;
  std::int64_t max_year = 0;
  std::int64_t span = 0;
};

YearSpan year_span(const std::vector<api::PlayListing>& plays);

struct CorpusSpan {
  std::string corpus;
  YearSpan span;
};

// Corpora without dated plays are skipped; ties go to the first name.
CorpusSpan widest_span_corpus(const std::map<std::string, std::vector<api::PlayListing>>& plays_by_corpus);

// FEMALE / (FEMALE + MALE); UNKNOWN and ungendered entries are left out of
// the denominator.
double female_share_of_play(const std::vector<api::CharacterRecord>& characters);
std::optional<double> female_share_from_counts(std::int64_t female, std::int64_t male);

struct PlayShare {
  std::string play;
  std::int64_t year = 0;
  double share = 0.0;
};

// Plays with a normalized year and at least one gendered speaker, taken from
// the per-play gender counts of the corpus metadata.
std::vector<PlayShare> play_shares_from_metadata(const std::vector<api::MetadataRow>& rows);

struct ShareBin {
  std::int64_t period_start = 0;
  std::int64_t period_end = 0;
  double mean_female_share = 0.0;
  std::int64_t play_count = 0;
};

// Bins [d, d + width - 1] with d = floor(year / width) * width; unweighted
// mean of the per-play shares; empty bins omitted.
std::vector<ShareBin> female_share_series(const std::vector<PlayShare>& shares, std::int64_t bin_width = 10);

struct RankedCharacter {
  std::string id;
  double composite_rank = 0.0;
};

// Fractional rank (1 = largest) per metric over words, speech acts, scenes
// and degree; composite is their mean. Ascending composite, ties by id.
std::vector<RankedCharacter> dominance_ranking(const std::vector<api::CharacterRecord>& characters);

}  // namespace dracor_mcp::oracle
