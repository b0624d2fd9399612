#include "app.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "dracor_mcp/eval.hpp"
#include "dracor_mcp/fixture_backend.hpp"
#include "dracor_mcp/http_backend.hpp"
#include "dracor_mcp/json_format.hpp"
#include "dracor_mcp/oracle.hpp"
#include "dracor_mcp/protocol.hpp"
#include "dracor_mcp/toolset.hpp"

namespace dracor_mcp::app {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

spdlog::level::level_enum to_spdlog(LogLevel l) {
  switch (l) {
    case LogLevel::Trace:
      return spdlog::level::trace;
    case LogLevel::Debug:
      return spdlog::level::debug;
    case LogLevel::Info:
      return spdlog::level::info;
    case LogLevel::Warn:
      return spdlog::level::warn;
    case LogLevel::Error:
      return spdlog::level::err;
    case LogLevel::Off:
      return spdlog::level::off;
  }
  return spdlog::level::warn;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err, LogLevel level) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("dracor-mcp", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(to_spdlog(level));
  return logger;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct OracleArgs {
  std::string query;
  std::string corpus;
  std::string play;
  std::int64_t network_size = 0;
  std::int64_t edge_count = 0;
  std::int64_t bin_width = 10;
};

json run_oracle(const OracleArgs& a, const api::DracorClient& client) {
  using namespace oracle;
  if (a.query == "complexity") {
    return {{"network_size", a.network_size},
            {"edge_count", a.edge_count},
            {"complexity_score", round_to(complexity_score(a.network_size, a.edge_count), 2)}};
  }
  if (a.query == "mean-characters") {
    for (const auto& s : client.fetch_corpora()) {
      if (s.name == a.corpus) return {{"corpus", s.name}, {"mean", mean_characters_from_summary(s)}};
    }
    throw OracleError("unknown corpus: " + a.corpus);
  }
  if (a.query == "highest-mean") {
    const auto m = highest_mean_corpus(client.fetch_corpora());
    return {{"corpus", m.corpus}, {"mean", m.mean}};
  }
  if (a.query == "year-span") {
    const auto s = year_span(client.fetch_corpus(a.corpus).plays);
    return {{"corpus", a.corpus}, {"min_year", s.min_year}, {"max_year", s.max_year}, {"span", s.span}};
  }
  if (a.query == "widest-span") {
    std::map<std::string, std::vector<api::PlayListing>> plays;
    for (const auto& s : client.fetch_corpora()) plays[s.name] = client.fetch_corpus(s.name).plays;
    const auto w = widest_span_corpus(plays);
    return {{"corpus", w.corpus}, {"min_year", w.span.min_year}, {"max_year", w.span.max_year}, {"span", w.span.span}};
  }
  if (a.query == "female-share") {
    json bins = json::array();
    for (const auto& b : female_share_series(play_shares_from_metadata(client.fetch_corpus_metadata(a.corpus)), a.bin_width)) {
      bins.push_back({{"period_start", b.period_start},
                      {"period_end", b.period_end},
                      {"mean_female_share", b.mean_female_share},
                      {"play_count", b.play_count}});
    }
    return {{"corpus", a.corpus}, {"bin_width", a.bin_width}, {"series", bins}};
  }
  if (a.query == "dominance") {
    json ranked = json::array();
    for (const auto& c : dominance_ranking(client.fetch_play_characters(a.corpus, a.play))) {
      ranked.push_back({{"id", c.id}, {"composite_rank", c.composite_rank}});
    }
    return {{"corpus", a.corpus}, {"play", a.play}, {"ranking", ranked}};
  }
  throw OracleError("unknown oracle query: " + a.query);
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
}

void apply_env(AppConfig& config, bool base_url_from_flag, bool fixtures_from_flag, const EnvLookup& env) {
  if (!base_url_from_flag) {
    if (auto v = env("DRACOR_API_BASE_URL")) config.base_url = *v;
  }
  if (!fixtures_from_flag) {
    if (auto v = env("DRACOR_FIXTURES_DIR")) config.fixtures_dir = *v;
  }
}

std::shared_ptr<const api::Backend> make_backend(const AppConfig& config) {
  if (config.fixtures_dir) return std::make_shared<api::FixtureBackend>(*config.fixtures_dir);
  return std::make_shared<api::HttpBackend>(config.base_url);
}

std::unique_ptr<tools::ToolRegistry> make_registry(const AppConfig& config,
                                                    std::shared_ptr<const api::DracorClient> client) {
  auto registry = std::make_unique<tools::ToolRegistry>();
  tools::ToolsetOptions options;
  options.api_base_url = config.base_url;
  options.max_chars = config.max_response_chars;
  tools::register_dracor_tools(*registry, std::move(client), options);
  if (config.registry_catalog) {
    json catalog;
    try {
      catalog = json::parse(read_file(*config.registry_catalog));
    } catch (const json::parse_error& e) {
      throw tools::RegistryError("catalog " + config.registry_catalog->string() + " is not valid JSON: " + e.what());
    }
    registry->apply_catalog(catalog);
  }
  return registry;
}

int run_main(const std::vector<std::string>& argv, const EnvLookup& env, Streams io) {
  CLI::App app{"DraCor MCP server and evaluation tools", "dracor-mcp"};
  app.require_subcommand(1);
  app.fallthrough();

  AppConfig config;
  std::string fixtures_flag;
  std::string catalog_flag;
  auto* base_opt = app.add_option("--base-url", config.base_url, "DraCor API base URL");
  auto* fixtures_opt = app.add_option("--fixtures", fixtures_flag, "Serve from a fixture snapshot instead of the live API");
  app.add_option("--catalog", catalog_flag, "JSON file with docstring overrides")->check(CLI::ExistingFile);
  app.add_option("--max-response-chars", config.max_response_chars, "Size guard limit in characters")
      ->check(CLI::PositiveNumber);
  const std::map<std::string, LogLevel> levels = {{"trace", LogLevel::Trace}, {"debug", LogLevel::Debug},
                                                 {"info", LogLevel::Info},   {"warn", LogLevel::Warn},
                                                 {"error", LogLevel::Error}, {"off", LogLevel::Off}};
  app.add_option("--log-level", config.log_level, "trace, debug, info, warn, error or off")
      ->transform(CLI::CheckedTransformer(levels, CLI::ignore_case));

  auto* serve = app.add_subcommand("serve", "Run the MCP server on stdio");
  std::string protocol_version{rpc::kDefaultProtocolVersion};
  serve->add_option("--protocol-version", protocol_version, "Protocol version offered when the client names none");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluation harness");
  eval_cmd->require_subcommand(1);
  auto* score = eval_cmd->add_subcommand("score", "Score traces against experiment specs");
  std::string specs_dir;
  std::string traces_dir;
  std::string out_path;
  std::string csv_path;
  bool strict = false;
  score->add_option("--specs", specs_dir, "Directory of experiment specs")->required()->check(CLI::ExistingDirectory);
  score->add_option("--traces", traces_dir, "Directory of trace runs")->required()->check(CLI::ExistingDirectory);
  score->add_option("--out", out_path, "Markdown output file (default: standard output)");
  score->add_option("--csv", csv_path, "CSV output file");
  score->add_flag("--strict", strict, "Fail when an experiment has no traces");

  auto* oracle_cmd = app.add_subcommand("oracle", "Reference computations over the configured backend");
  OracleArgs oa;
  oracle_cmd->add_option("query", oa.query, "complexity, mean-characters, highest-mean, year-span, widest-span, female-share or dominance")
      ->required()
      ->check(CLI::IsMember({"complexity", "mean-characters", "highest-mean", "year-span", "widest-span", "female-share",
                             "dominance"}));
  oracle_cmd->add_option("--corpus", oa.corpus, "Corpus slug");
  oracle_cmd->add_option("--play", oa.play, "Play slug");
  oracle_cmd->add_option("--size", oa.network_size, "Network size (complexity)")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--edges", oa.edge_count, "Edge count (complexity)")->check(CLI::NonNegativeNumber);
  oracle_cmd->add_option("--bin-width", oa.bin_width, "Period width in years (female-share)")->check(CLI::PositiveNumber);

  auto* fixtures_cmd = app.add_subcommand("fixtures", "Fixture snapshots");
  fixtures_cmd->require_subcommand(1);
  auto* record = fixtures_cmd->add_subcommand("record", "Record API responses listed in a plan file");
  std::string plan_path;
  std::string record_out;
  std::string recorded_at;
  record->add_option("--plan", plan_path, "File with one request target per line")->required()->check(CLI::ExistingFile);
  record->add_option("--out", record_out, "Output directory")->required();
  record->add_option("--recorded-at", recorded_at, "Timestamp written to the manifest (default: now, UTC)");

  auto* lint_cmd = app.add_subcommand("lint-docstrings", "Check the tool catalog docstrings");

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!fixtures_flag.empty()) config.fixtures_dir = fixtures_flag;
  if (!catalog_flag.empty()) config.registry_catalog = catalog_flag;
  apply_env(config, base_opt->count() > 0, fixtures_opt->count() > 0, env);

  auto log = make_logger(io.err, config.log_level);

  try {
    if (*lint_cmd) {
      auto client = std::make_shared<const api::DracorClient>(make_backend(config));
      auto registry = make_registry(config, client);
      const auto violations = tools::lint(*registry);
      for (const auto& v : violations) io.err << v.rule << ": " << v.tool << ": " << v.message << "\n";
      io.err << registry->size() << " tools, " << violations.size() << " violations\n";
      return violations.empty() ? kExitOk : kExitFailure;
    }

    if (*serve) {
      log->info("backend: {}", make_backend(config)->describe());
      auto client = std::make_shared<const api::DracorClient>(make_backend(config));
      auto registry = make_registry(config, client);
      std::vector<rpc::Resource> resources;
      resources.push_back({"dracor://corpora/registry", "corpus-registry",
                           "Registry of DraCor corpora with their repositories and maintainers", "application/json",
                           [client] { return stable_dump(client->fetch_corpus_registry()); }});
      rpc::ServerOptions options;
      options.protocol_version = protocol_version;
      rpc::Server server(*registry, std::move(resources), options);
      server.run(io.in, io.out);
      return kExitOk;
    }

    if (*score) {
      const auto bundle = eval::load_bundle(specs_dir, traces_dir);
      const auto table = eval::aggregate(bundle.specs, bundle.runs);
      const std::string md = eval::render_markdown(table);
      if (out_path.empty()) {
        io.out << md;
      } else {
        write_file(out_path, md);
        io.out << eval::summary_line(table.summary) << "\n";
      }
      if (!csv_path.empty()) write_file(csv_path, eval::render_csv(table));
      if (table.summary.missing > 0) {
        for (const auto& r : table.rows) {
          if (!r.card) log->warn("experiment {} has no traces", r.id);
        }
        if (strict) return kExitFailure;
      }
      return kExitOk;
    }

    if (*oracle_cmd) {
      const bool needs_corpus = oa.query != "complexity" && oa.query != "highest-mean" && oa.query != "widest-span";
      if (needs_corpus && oa.corpus.empty()) {
        io.err << "oracle " << oa.query << " requires --corpus\n";
        return kExitUsage;
      }
      if (oa.query == "dominance" && oa.play.empty()) {
        io.err << "oracle dominance requires --play\n";
        return kExitUsage;
      }
      api::DracorClient client(make_backend(config));
      io.out << stable_dump(run_oracle(oa, client)) << "\n";
      return kExitOk;
    }

    if (*record) {
      const auto plan = api::parse_request_plan(read_file(plan_path));
      const auto backend = make_backend(config);
      log->info("recording {} targets from {}", plan.size(), backend->describe());
      const auto result = api::record_fixtures(*backend, config.base_url, plan, record_out,
                                               recorded_at.empty() ? utc_now() : recorded_at);
      io.err << "recorded " << plan.size() - result.failures << " of " << plan.size() << " targets into " << record_out
             << "\n";
      return result.failures == 0 ? kExitOk : kExitFailure;
    }
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace dracor_mcp::app
