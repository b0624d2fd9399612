// Scoring of recorded tool-calling traces against experiment specs.
//
// Four metrics per experiment: correct answer in [0,1], tool correctness in
// {0, 0.5, 1}, tool-calling efficiency in 1..5 (run 1 only) and reliability
// k/n over all runs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dracor_mcp::eval {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class ErrorKind { SizeLimit, NotFound, InvalidParams, Transport, RefusedBatch, Other };

std::string_view to_string(ErrorKind k);
std::optional<ErrorKind> parse_error_kind(std::string_view text);

struct ToolCallEvent {
  std::int64_t index = 0;
  std::string tool;
  json arguments = json::object();
  std::optional<ErrorKind> error;  // nullopt = ok
  std::int64_t response_chars = 0;

  bool ok() const noexcept { return !error.has_value(); }
};

struct FinalAnswer {
  std::string text;
  std::map<std::string, json> values;
};

struct TraceRun {
  std::string experiment_id;
  std::int64_t run_index = 1;
  std::vector<ToolCallEvent> events;
  FinalAnswer final_answer;
};

enum class MatchMode { Exact, CaseInsensitive, Numeric };
enum class ToleranceMode { Absolute, Relative };

struct AnswerComponent {
  std::string component;
  json expected;
  double tolerance = 0.0;
  ToleranceMode tolerance_mode = ToleranceMode::Absolute;
  double weight = 1.0;
  MatchMode match = MatchMode::Exact;
};

struct ExperimentSpec {
  std::string id;
  std::string prompt;
  std::vector<AnswerComponent> answer_key;
  std::vector<std::set<std::string>> acceptable_tool_sets;
  std::map<std::string, std::set<std::string>> redundant_after;
  std::int64_t n_runs = 5;
};

// `field` is a JSON-pointer-like path to the offending member ("events/2/outcome").
class LoadError : public std::runtime_error {
 public:
  LoadError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

TraceRun load_trace(const json& doc);
ExperimentSpec load_spec(const json& doc);
json to_json(const TraceRun& run);
json to_json(const ExperimentSpec& spec);

bool component_matches(const AnswerComponent& key, const FinalAnswer& answer);
std::vector<bool> match_vector(const TraceRun& run, const ExperimentSpec& spec);
double score_answer(const TraceRun& run, const ExperimentSpec& spec);

std::set<std::string> successful_tools(const TraceRun& run);
double score_tool_correctness(const TraceRun& run, const ExperimentSpec& spec);

struct Efficiency {
  int dead_ends = 0;
  int detours = 0;
  int score = 5;
};
Efficiency efficiency_breakdown(const TraceRun& run, const ExperimentSpec& spec);
int score_efficiency(const TraceRun& run, const ExperimentSpec& spec);

struct Reliability {
  int k = 0;
  int n = 0;
};
// runs[0] is the reference run.
Reliability score_reliability(const std::vector<TraceRun>& runs, const ExperimentSpec& spec);

struct ScoreCard {
  double correct_answer = 0.0;
  double tool_correctness = 0.0;
  int efficiency = 5;
  Reliability reliability;
};

struct ResultRow {
  std::string id;
  std::string prompt;
  std::optional<ScoreCard> card;  // nullopt when the experiment has no traces
};

struct Summary {
  std::size_t experiments = 0;
  std::size_t scored = 0;
  std::size_t missing = 0;
  std::size_t correct = 0;           // rows with correct_answer == 1
  std::size_t tool_correct = 0;      // rows with tool_correctness == 1
  std::size_t reliable = 0;          // rows with k == n
  std::size_t perfect_efficiency = 0;
  double mean_correct_answer = 0.0;
  double mean_tool_correctness = 0.0;
  double mean_efficiency = 0.0;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  Summary summary;
};

// Orders experiments by id ("1-2" before "1-10") and runs by run_index.
ResultsTable aggregate(const std::vector<ExperimentSpec>& specs, const std::vector<TraceRun>& runs);

struct Bundle {
  std::vector<ExperimentSpec> specs;
  std::vector<TraceRun> runs;
};
// Reads every *.json file in both directories. Errors name the file.
Bundle load_bundle(const std::filesystem::path& spec_dir, const std::filesystem::path& trace_dir);

std::string format_score(double v);
std::string render_markdown(const ResultsTable& table);
std::string render_csv(const ResultsTable& table);
std::string summary_line(const Summary& s);

// Orders "1-2" before "1-10".
bool experiment_id_less(const std::string& a, const std::string& b);

}  // namespace dracor_mcp::eval
