#include <benchmark/benchmark.h>

#include <filesystem>

#include "dracor_mcp/eval.hpp"
#include "dracor_mcp/fixture_backend.hpp"
#include "dracor_mcp/json_format.hpp"
#include "dracor_mcp/text_fold.hpp"
#include "dracor_mcp/toolset.hpp"

using namespace dracor_mcp;
using json = nlohmann::json;

namespace {

const std::filesystem::path kSource = DRACOR_MCP_SOURCE_DIR;

std::shared_ptr<const api::DracorClient> client() {
  static auto c = std::make_shared<const api::DracorClient>(
      std::make_shared<api::FixtureBackend>(kSource / "fixtures" / "dracor"));
  return c;
}

const json& ger_metadata() {
  static const json j = api::to_json(client()->fetch_corpus_metadata("ger"));
  return j;
}

void BM_StableDumpCorpusMetadata(benchmark::State& state) {
  std::size_t bytes = 0;
  for (auto _ : state) {
    const std::string s = stable_dump(ger_metadata());
    bytes += s.size();
    benchmark::DoNotOptimize(s.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_StableDumpCorpusMetadata);

void BM_CharCount(benchmark::State& state) {
  const std::string s = stable_dump(ger_metadata());
  for (auto _ : state) benchmark::DoNotOptimize(char_count(s));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * s.size()));
}
BENCHMARK(BM_CharCount);

void BM_FoldTitles(benchmark::State& state) {
  const auto plays = client()->fetch_corpus("ger").plays;
  for (auto _ : state) {
    for (const auto& p : plays) benchmark::DoNotOptimize(fold_for_search(p.title.value_or("")));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * plays.size()));
}
BENCHMARK(BM_FoldTitles);

void BM_TitleSearch(benchmark::State& state) {
  const auto plays = client()->fetch_corpus("ger").plays;
  for (auto _ : state) benchmark::DoNotOptimize(tools::plays_by_title(plays, "tod"));
}
BENCHMARK(BM_TitleSearch);

void BM_Paginate(benchmark::State& state) {
  const auto per = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(tools::paginate(ger_metadata(), per, 2));
}
BENCHMARK(BM_Paginate)->Arg(7)->Arg(50)->Arg(500);

void BM_GuardedToolCall(benchmark::State& state) {
  tools::ToolRegistry r;
  tools::register_dracor_tools(r, client());
  const json args = {{"corpus_name", "ger"}};
  for (auto _ : state) benchmark::DoNotOptimize(r.call("get_corpus_metadata", args));
}
BENCHMARK(BM_GuardedToolCall);

void BM_ScoreBundle(benchmark::State& state) {
  const auto bundle = eval::load_bundle(kSource / "bundle" / "specs", kSource / "bundle" / "traces");
  for (auto _ : state) benchmark::DoNotOptimize(eval::aggregate(bundle.specs, bundle.runs));
}
BENCHMARK(BM_ScoreBundle);

}  // namespace

BENCHMARK_MAIN();
