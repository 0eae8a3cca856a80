#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "generators.hpp"
#include "secrec/dsl.hpp"
#include "secrec/lint.hpp"
#include "secrec/maut.hpp"
#include "secrec/solver.hpp"

using namespace secrec;

namespace {

const std::filesystem::path kRoot = SECREC_SOURCE_DIR;

const KnowledgeBase& shipped() {
  static KnowledgeBase kb = load_kb_file(kRoot / "kbs" / "authn.kb").kb;
  return kb;
}

std::vector<ContextAssignment> table_contexts() {
  std::vector<ContextAssignment> out;
  for (int k = 1; k <= 8; ++k)
    out.push_back(load_context_file(kRoot / "rcs" / ("rc" + std::to_string(k) + ".ctx")).context);
  return out;
}

KnowledgeBase sized_kb(int patterns, int filters) {
  std::mt19937_64 rng(42);
  testing::GenOptions opts;
  opts.max_patterns = patterns;
  opts.max_filters = filters;
  opts.max_constraints = 0;
  return testing::random_kb(rng, opts);
}

void BM_ParseShipped(benchmark::State& state) {
  std::string text = read_text_file(kRoot / "kbs" / "authn.kb");
  for (auto _ : state) benchmark::DoNotOptimize(parse_kb(text));
}
BENCHMARK(BM_ParseShipped);

void BM_SerializeParseRandom(benchmark::State& state) {
  std::string text = serialize_kb(sized_kb(static_cast<int>(state.range(0)), 12));
  for (auto _ : state) benchmark::DoNotOptimize(parse_kb(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_SerializeParseRandom)->Arg(8)->Arg(64)->Arg(256);

void BM_RankTableContexts(benchmark::State& state) {
  auto contexts = table_contexts();
  for (auto _ : state) {
    for (const auto& ctx : contexts) benchmark::DoNotOptimize(rank(shipped(), ctx));
  }
}
BENCHMARK(BM_RankTableContexts);

void BM_FilterRandom(benchmark::State& state) {
  KnowledgeBase kb = sized_kb(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  auto contexts = testing::all_total_contexts(kb);
  for (auto _ : state) {
    for (const auto& ctx : contexts) benchmark::DoNotOptimize(filter_patterns(kb, ctx));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * contexts.size()));
}
BENCHMARK(BM_FilterRandom)->Args({8, 6})->Args({64, 24})->Args({256, 64});

void BM_PartialFeasibility(benchmark::State& state) {
  ContextAssignment ctx;
  ctx.set("sec-lev", "high");
  ctx.set("intern-extern", "external");
  for (auto _ : state) benchmark::DoNotOptimize(filter_patterns(shipped(), ctx));
}
BENCHMARK(BM_PartialFeasibility);

void BM_LintShipped(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lint_kb(shipped()));
}
BENCHMARK(BM_LintShipped);

void BM_DiagnoseConflict(benchmark::State& state) {
  KnowledgeBase kb = shipped();
  kb.filters.push_back({"F4", Condition::eq("budget", "low"), Condition::eq("costs", "low"), ""});
  std::vector<Answer> answers = {{"sec-lev", "high"},     {"use-lev", "low"},          {"budget", "low"},
                                 {"no-users", "low"},     {"intern-extern", "external"}, {"shared-device", "yes"}};
  for (auto _ : state) benchmark::DoNotOptimize(diagnose_conflict(kb, answers));
}
BENCHMARK(BM_DiagnoseConflict);

}  // namespace
BENCHMARK_MAIN();
