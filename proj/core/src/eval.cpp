#include "dracor_mcp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace dracor_mcp::eval {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) { throw LoadError(field, message); }

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + key, "missing required member");
  return *it;
}

std::string string_member(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) fail(path + key, "expected a string");
  return v.get<std::string>();
}

std::int64_t int_member(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number_integer()) fail(path + key, "expected an integer");
  return v.get<std::int64_t>();
}

double number_member(const json& obj, const std::string& path, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(path + key, "expected a number");
  return it->get<double>();
}

void check_object(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path.empty() ? "/" : path, "expected an object");
}

void check_schema_version(const json& doc) {
  if (auto it = doc.find("schema_version"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
      fail("schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
    }
  }
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> as_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && std::isfinite(d)) return d;
  }
  return std::nullopt;
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::vector<long long> id_parts(const std::string& id) {
  std::vector<long long> parts;
  std::string cur;
  for (char c : id + "-") {
    if (c >= '0' && c <= '9') {
      cur.push_back(c);
    } else if (!cur.empty()) {
      parts.push_back(std::stoll(cur));
      cur.clear();
    }
  }
  return parts;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<fs::path> json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t width) { return s + std::string(width - display_width(s), ' '); }

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out.push_back(' ');
    else out.push_back(c);
  }
  return out;
}

}  // namespace

LoadError::LoadError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SizeLimit:
      return "size_limit";
    case ErrorKind::NotFound:
      return "not_found";
    case ErrorKind::InvalidParams:
      return "invalid_params";
    case ErrorKind::Transport:
      return "transport";
    case ErrorKind::RefusedBatch:
      return "refused_batch";
    case ErrorKind::Other:
      return "other";
  }
  return "other";
}

std::optional<ErrorKind> parse_error_kind(std::string_view text) {
  for (auto k : {ErrorKind::SizeLimit, ErrorKind::NotFound, ErrorKind::InvalidParams, ErrorKind::Transport,
                 ErrorKind::RefusedBatch, ErrorKind::Other}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// loading

TraceRun load_trace(const json& doc) {
  check_object(doc, "");
  check_schema_version(doc);
  TraceRun run;
  run.experiment_id = string_member(doc, "", "experiment_id");
  if (run.experiment_id.empty()) fail("experiment_id", "must not be empty");
  run.run_index = int_member(doc, "", "run_index");
  if (run.run_index < 1) fail("run_index", "must be at least 1");

  const json& events = member(doc, "", "events");
  if (!events.is_array()) fail("events", "expected an array");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "events/" + std::to_string(i) + "/";
    const json& e = events[i];
    check_object(e, path);
    ToolCallEvent ev;
    ev.index = int_member(e, path, "index");
    if (ev.index != static_cast<std::int64_t>(i) + 1) {
      fail(path + "index", "event indices must run 1..k without gaps (expected " + std::to_string(i + 1) + ")");
    }
    ev.tool = string_member(e, path, "tool");
    if (ev.tool.empty()) fail(path + "tool", "must not be empty");
    if (auto a = e.find("arguments"); a != e.end()) {
      if (!a->is_object()) fail(path + "arguments", "expected an object");
      ev.arguments = *a;
    }
    const std::string outcome = string_member(e, path, "outcome");
    if (outcome == "error") {
      const std::string kind = string_member(e, path, "error_kind");
      ev.error = parse_error_kind(kind);
      if (!ev.error) fail(path + "error_kind", "unknown error kind '" + kind + "'");
    } else if (outcome != "ok") {
      fail(path + "outcome", "expected \"ok\" or \"error\"");
    } else if (e.contains("error_kind")) {
      fail(path + "error_kind", "only allowed when outcome is \"error\"");
    }
    if (e.contains("response_chars")) {
      ev.response_chars = int_member(e, path, "response_chars");
      if (ev.response_chars < 0) fail(path + "response_chars", "must not be negative");
    }
    run.events.push_back(std::move(ev));
  }

  const json& answer = member(doc, "", "final_answer");
  check_object(answer, "final_answer");
  run.final_answer.text = string_member(answer, "final_answer/", "text");
  if (auto v = answer.find("values"); v != answer.end()) {
    if (!v->is_object()) fail("final_answer/values", "expected an object");
    for (const auto& [k, val] : v->items()) {
      if (val.is_object() || val.is_array()) fail("final_answer/values/" + k, "expected a scalar");
      run.final_answer.values[k] = val;
    }
  }
  return run;
}

ExperimentSpec load_spec(const json& doc) {
  check_object(doc, "");
  check_schema_version(doc);
  ExperimentSpec spec;
  spec.id = string_member(doc, "", "id");
  if (spec.id.empty()) fail("id", "must not be empty");
  spec.prompt = string_member(doc, "", "prompt");

  const json& key = member(doc, "", "answer_key");
  if (!key.is_array() || key.empty()) fail("answer_key", "expected a non-empty array");
  double weights = 0.0;
  std::set<std::string> names;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const std::string path = "answer_key/" + std::to_string(i) + "/";
    const json& k = key[i];
    check_object(k, path);
    AnswerComponent c;
    c.component = string_member(k, path, "component");
    if (!names.insert(c.component).second) fail(path + "component", "duplicate component '" + c.component + "'");
    c.expected = member(k, path, "expected");
    if (!c.expected.is_string() && !c.expected.is_number()) fail(path + "expected", "expected a number or a string");
    const std::string match = string_member(k, path, "match");
    if (match == "exact") {
      c.match = MatchMode::Exact;
    } else if (match == "case-insensitive") {
      c.match = MatchMode::CaseInsensitive;
    } else if (match == "numeric") {
      c.match = MatchMode::Numeric;
      if (!c.expected.is_number()) fail(path + "expected", "numeric match needs a number");
    } else {
      fail(path + "match", "expected exact, case-insensitive or numeric");
    }
    c.tolerance = number_member(k, path, "tolerance", 0.0);
    if (c.tolerance < 0.0) fail(path + "tolerance", "must not be negative");
    if (auto m = k.find("tolerance_mode"); m != k.end()) {
      if (*m == "abs") {
        c.tolerance_mode = ToleranceMode::Absolute;
      } else if (*m == "rel") {
        c.tolerance_mode = ToleranceMode::Relative;
      } else {
        fail(path + "tolerance_mode", "expected \"abs\" or \"rel\"");
      }
    }
    c.weight = number_member(k, path, "weight", 1.0);
    if (c.weight <= 0.0) fail(path + "weight", "must be positive");
    weights += c.weight;
    spec.answer_key.push_back(std::move(c));
  }
  if (std::abs(weights - 1.0) > 1e-6) fail("answer_key", "weights must sum to 1");

  const json& sets = member(doc, "", "acceptable_tool_sets");
  if (!sets.is_array() || sets.empty()) fail("acceptable_tool_sets", "expected a non-empty array");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string path = "acceptable_tool_sets/" + std::to_string(i);
    if (!sets[i].is_array() || sets[i].empty()) fail(path, "expected a non-empty array of tool names");
    std::set<std::string> s;
    for (const auto& t : sets[i]) {
      if (!t.is_string()) fail(path, "tool names must be strings");
      s.insert(t.get<std::string>());
    }
    spec.acceptable_tool_sets.push_back(std::move(s));
  }

  if (auto r = doc.find("redundant_after"); r != doc.end()) {
    if (!r->is_object()) fail("redundant_after", "expected an object");
    for (const auto& [tool, prereqs] : r->items()) {
      const std::string path = "redundant_after/" + tool;
      if (!prereqs.is_array() || prereqs.empty()) fail(path, "expected a non-empty array of tool names");
      for (const auto& p : prereqs) {
        if (!p.is_string()) fail(path, "tool names must be strings");
        spec.redundant_after[tool].insert(p.get<std::string>());
      }
    }
  }
  if (doc.contains("n_runs")) {
    spec.n_runs = int_member(doc, "", "n_runs");
    if (spec.n_runs < 1) fail("n_runs", "must be at least 1");
  }
  return spec;
}

json to_json(const TraceRun& run) {
  json events = json::array();
  for (const auto& e : run.events) {
    json ev = {{"index", e.index}, {"tool", e.tool}, {"arguments", e.arguments}, {"outcome", e.ok() ? "ok" : "error"},
               {"response_chars", e.response_chars}};
    if (e.error) ev["error_kind"] = to_string(*e.error);
    events.push_back(std::move(ev));
  }
  json values = json::object();
  for (const auto& [k, v] : run.final_answer.values) values[k] = v;
  return {{"schema_version", kSchemaVersion},
          {"experiment_id", run.experiment_id},
          {"run_index", run.run_index},
          {"events", events},
          {"final_answer", {{"text", run.final_answer.text}, {"values", values}}}};
}

json to_json(const ExperimentSpec& spec) {
  json key = json::array();
  for (const auto& c : spec.answer_key) {
    const char* match = c.match == MatchMode::Exact ? "exact" : c.match == MatchMode::Numeric ? "numeric" : "case-insensitive";
    key.push_back({{"component", c.component},
                   {"expected", c.expected},
                   {"match", match},
                   {"tolerance", c.tolerance},
                   {"tolerance_mode", c.tolerance_mode == ToleranceMode::Absolute ? "abs" : "rel"},
                   {"weight", c.weight}});
  }
  json sets = json::array();
  for (const auto& s : spec.acceptable_tool_sets) sets.push_back(s);
  json redundant = json::object();
  for (const auto& [t, p] : spec.redundant_after) redundant[t] = p;
  return {{"schema_version", kSchemaVersion},
          {"id", spec.id},
          {"prompt", spec.prompt},
          {"answer_key", key},
          {"acceptable_tool_sets", sets},
          {"redundant_after", redundant},
          {"n_runs", spec.n_runs}};
}

// ---------------------------------------------------------------------------
// scoring

bool component_matches(const AnswerComponent& key, const FinalAnswer& answer) {
  auto it = answer.values.find(key.component);
  if (it == answer.values.end() || it->second.is_null()) return false;
  const json& got = it->second;
  switch (key.match) {
    case MatchMode::Numeric: {
      const auto g = as_number(got);
      if (!g) return false;
      const double expected = key.expected.get<double>();
      const double tol = key.tolerance_mode == ToleranceMode::Absolute ? key.tolerance : key.tolerance * std::abs(expected);
      return std::abs(*g - expected) <= tol + 1e-12;
    }
    case MatchMode::CaseInsensitive: {
      const std::string a = trim(scalar_text(got));
      const std::string b = trim(scalar_text(key.expected));
      return icu::UnicodeString::fromUTF8(a).caseCompare(icu::UnicodeString::fromUTF8(b), U_FOLD_CASE_DEFAULT) == 0;
    }
    case MatchMode::Exact:
      if (got.is_number() && key.expected.is_number()) return got.get<double>() == key.expected.get<double>();
      return scalar_text(got) == scalar_text(key.expected) && got.is_string() == key.expected.is_string();
  }
  return false;
}

std::vector<bool> match_vector(const TraceRun& run, const ExperimentSpec& spec) {
  std::vector<bool> out;
  out.reserve(spec.answer_key.size());
  for (const auto& k : spec.answer_key) out.push_back(component_matches(k, run.final_answer));
  return out;
}

double score_answer(const TraceRun& run, const ExperimentSpec& spec) {
  double total = 0.0;
  double matched = 0.0;
  const auto m = match_vector(run, spec);
  for (std::size_t i = 0; i < spec.answer_key.size(); ++i) {
    total += spec.answer_key[i].weight;
    if (m[i]) matched += spec.answer_key[i].weight;
  }
  if (total <= 0.0) return 0.0;
  return std::round(matched / total * 1e9) / 1e9;
}

std::set<std::string> successful_tools(const TraceRun& run) {
  std::set<std::string> out;
  for (const auto& e : run.events) {
    if (e.ok()) out.insert(e.tool);
  }
  return out;
}

double score_tool_correctness(const TraceRun& run, const ExperimentSpec& spec) {
  const auto used = successful_tools(run);
  const bool right_tools = std::any_of(spec.acceptable_tool_sets.begin(), spec.acceptable_tool_sets.end(),
                                       [&](const std::set<std::string>& s) {
                                         return std::includes(used.begin(), used.end(), s.begin(), s.end());
                                       });
  if (!right_tools) return 0.0;
  const double answer = score_answer(run, spec);
  return answer > 0.0 && answer < 1.0 ? 0.5 : 1.0;
}

Efficiency efficiency_breakdown(const TraceRun& run, const ExperimentSpec& spec) {
  Efficiency eff;
  bool in_error_run = false;
  std::set<std::string> succeeded;
  for (const auto& e : run.events) {
    if (e.error == ErrorKind::RefusedBatch) {
      ++eff.dead_ends;
      in_error_run = false;
      continue;
    }
    if (e.error) {
      if (!in_error_run) ++eff.dead_ends;
      in_error_run = true;
      continue;
    }
    in_error_run = false;
    if (auto r = spec.redundant_after.find(e.tool); r != spec.redundant_after.end()) {
      const bool redundant = std::any_of(r->second.begin(), r->second.end(),
                                         [&](const std::string& t) { return succeeded.count(t) > 0; });
      if (redundant) ++eff.detours;
    }
    succeeded.insert(e.tool);
  }
  eff.score = std::clamp(5 - eff.dead_ends - eff.detours, 1, 5);
  return eff;
}

int score_efficiency(const TraceRun& run, const ExperimentSpec& spec) { return efficiency_breakdown(run, spec).score; }

Reliability score_reliability(const std::vector<TraceRun>& runs, const ExperimentSpec& spec) {
  Reliability r;
  r.n = static_cast<int>(runs.size());
  if (runs.empty()) return r;
  const auto ref_tools = successful_tools(runs.front());
  const auto ref_match = match_vector(runs.front(), spec);
  for (const auto& run : runs) {
    if (successful_tools(run) == ref_tools && match_vector(run, spec) == ref_match) ++r.k;
  }
  return r;
}

// ---------------------------------------------------------------------------
// aggregation

bool experiment_id_less(const std::string& a, const std::string& b) {
  const auto pa = id_parts(a);
  const auto pb = id_parts(b);
  if (pa != pb) return pa < pb;
  return a < b;
}

ResultsTable aggregate(const std::vector<ExperimentSpec>& specs, const std::vector<TraceRun>& runs) {
  std::map<std::string, const ExperimentSpec*> by_id;
  for (const auto& s : specs) {
    if (!by_id.emplace(s.id, &s).second) throw LoadError("id", "duplicate experiment id '" + s.id + "'");
  }
  std::map<std::string, std::vector<TraceRun>> grouped;
  for (const auto& r : runs) {
    if (!by_id.count(r.experiment_id)) {
      throw LoadError("experiment_id", "trace refers to unknown experiment '" + r.experiment_id + "'");
    }
    grouped[r.experiment_id].push_back(r);
  }

  std::vector<const ExperimentSpec*> ordered;
  for (const auto& [_, s] : by_id) ordered.push_back(s);
  std::sort(ordered.begin(), ordered.end(),
            [](const ExperimentSpec* a, const ExperimentSpec* b) { return experiment_id_less(a->id, b->id); });

  ResultsTable table;
  Summary& sum = table.summary;
  for (const ExperimentSpec* spec : ordered) {
    ResultRow row{spec->id, spec->prompt, std::nullopt};
    auto g = grouped.find(spec->id);
    ++sum.experiments;
    if (g == grouped.end() || g->second.empty()) {
      ++sum.missing;
      table.rows.push_back(std::move(row));
      continue;
    }
    auto& rs = g->second;
    std::sort(rs.begin(), rs.end(), [](const TraceRun& a, const TraceRun& b) { return a.run_index < b.run_index; });
    for (std::size_t i = 1; i < rs.size(); ++i) {
      if (rs[i].run_index == rs[i - 1].run_index) {
        throw LoadError("run_index", "duplicate run " + std::to_string(rs[i].run_index) + " for experiment " + spec->id);
      }
    }
    const TraceRun& first = rs.front();
    ScoreCard card;
    card.correct_answer = score_answer(first, *spec);
    card.tool_correctness = score_tool_correctness(first, *spec);
    card.efficiency = score_efficiency(first, *spec);
    card.reliability = score_reliability(rs, *spec);
    row.card = card;

    ++sum.scored;
    sum.correct += card.correct_answer == 1.0;
    sum.tool_correct += card.tool_correctness == 1.0;
    sum.reliable += card.reliability.k == card.reliability.n;
    sum.perfect_efficiency += card.efficiency == 5;
    sum.mean_correct_answer += card.correct_answer;
    sum.mean_tool_correctness += card.tool_correctness;
    sum.mean_efficiency += card.efficiency;
    table.rows.push_back(std::move(row));
  }
  if (sum.scored > 0) {
    const double n = static_cast<double>(sum.scored);
    sum.mean_correct_answer /= n;
    sum.mean_tool_correctness /= n;
    sum.mean_efficiency /= n;
  }
  return table;
}

Bundle load_bundle(const fs::path& spec_dir, const fs::path& trace_dir) {
  Bundle b;
  auto parse = [](const fs::path& p) {
    try {
      return json::parse(read_file(p));
    } catch (const json::parse_error& e) {
      throw LoadError(p.filename().string(), std::string("invalid JSON: ") + e.what());
    }
  };
  for (const auto& p : json_files(spec_dir)) {
    try {
      b.specs.push_back(load_spec(parse(p)));
    } catch (const LoadError& e) {
      throw LoadError(p.filename().string() + ":" + e.field(), e.what());
    }
  }
  for (const auto& p : json_files(trace_dir)) {
    try {
      b.runs.push_back(load_trace(parse(p)));
    } catch (const LoadError& e) {
      throw LoadError(p.filename().string() + ":" + e.field(), e.what());
    }
  }
  return b;
}

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

std::string render_markdown(const ResultsTable& table) {
  const std::vector<std::string> header = {"ID", "Prompt", "Correct Answer", "Tool Correctness", "Tool-Calling Efficiency",
                                           "Tool-Use Reliability"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : table.rows) {
    if (r.card) {
      cells.push_back({r.id, md_cell(r.prompt), format_score(r.card->correct_answer), format_score(r.card->tool_correctness),
                       std::to_string(r.card->efficiency),
                       std::to_string(r.card->reliability.k) + "/" + std::to_string(r.card->reliability.n)});
    } else {
      cells.push_back({r.id, md_cell(r.prompt), "missing", "missing", "missing", "missing"});
    }
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = display_width(header[c]);
    for (const auto& row : cells) width[c] = std::max(width[c], display_width(row[c]));
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out = "|";
    for (std::size_t c = 0; c < row.size(); ++c) out += " " + pad(row[c], width[c]) + " |";
    return out + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (auto w : width) out += std::string(w + 2, '-') + "|";
  out += "\n";
  for (const auto& row : cells) out += line(row);
  out += "\n" + summary_line(table.summary) + "\n";
  return out;
}

std::string render_csv(const ResultsTable& table) {
  std::string out = "id,prompt,correct_answer,tool_correctness,efficiency,reliability_k,reliability_n,status\n";
  for (const auto& r : table.rows) {
    out += csv_field(r.id) + "," + csv_field(r.prompt) + ",";
    if (r.card) {
      out += format_score(r.card->correct_answer) + "," + format_score(r.card->tool_correctness) + "," +
             std::to_string(r.card->efficiency) + "," + std::to_string(r.card->reliability.k) + "," +
             std::to_string(r.card->reliability.n) + ",scored\n";
    } else {
      out += ",,,,,missing\n";
    }
  }
  return out;
}

std::string summary_line(const Summary& s) {
  const std::string n = std::to_string(s.scored);
  return "Summary: " + std::to_string(s.experiments) + " experiments, " + n + " scored, " + std::to_string(s.missing) +
         " missing; correct answers " + std::to_string(s.correct) + "/" + n + " (mean " + format_score(s.mean_correct_answer) +
         "); tool correctness " + std::to_string(s.tool_correct) + "/" + n + " (mean " +
         format_score(s.mean_tool_correctness) + "); mean efficiency " + format_score(s.mean_efficiency) + " (" +
         std::to_string(s.perfect_efficiency) + "/" + n + " at 5); reliable " + std::to_string(s.reliable) + "/" + n;
}

}  // namespace dracor_mcp::eval
