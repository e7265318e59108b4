#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pcfg/analyze.hpp"
#include "pcfg/counting.hpp"
#include "pcfg/earley.hpp"
#include "pcfg/generate.hpp"
#include "pcfg/grammar.hpp"
#include "pcfg/invert.hpp"

namespace {

const char* kArith = R"g(
%whitespace skip ;
Expr   -> Term | Expr "+" Term | Expr "-" Term ;
Term   -> Factor | Term "*" Factor | Term "/" Factor ;
Factor -> Int | "+" Factor | "-" Factor | "(" Expr ")" ;
Int    -> Digit Int | Digit ;
Digit  -> "0" | "1" | "2" | "3" | "4" | "5" | "6" | "7" | "8" | "9" ;
)g";

pcfg::Grammar learned() {
  return pcfg::learn(pcfg::parse_grammar(kArith), {"1 + (2 * 3)"});
}

void BM_ParseGrammar(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(pcfg::parse_grammar(kArith));
}
BENCHMARK(BM_ParseGrammar);

void BM_ParseInput(benchmark::State& state) {
  pcfg::Grammar g = pcfg::parse_grammar(kArith);
  std::string input = "1";
  for (int i = 1; i < state.range(0); ++i)
    input += (i % 2 ? "+2" : "*(3)");
  for (auto _ : state)
    benchmark::DoNotOptimize(pcfg::parse_input(g, input));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ParseInput)->Range(8, 512)->Complexity();

void BM_Generate(benchmark::State& state) {
  pcfg::Grammar g = learned();
  pcfg::GeneratorConfig cfg{
      .max_expansions = static_cast<std::uint64_t>(state.range(0)),
      .seed = 42,
      .count = 1};
  std::uint64_t i = 0;
  for (auto _ : state) {
    pcfg::Xoshiro256 rng = pcfg::Xoshiro256::stream(cfg.seed, i++);
    benchmark::DoNotOptimize(pcfg::generate_tree(g, cfg, rng));
  }
}
BENCHMARK(BM_Generate)->Arg(50)->Arg(200)->Arg(1000);

void BM_GenerateInverted(benchmark::State& state) {
  pcfg::Grammar g = pcfg::invert(learned());
  pcfg::GeneratorConfig cfg{.max_expansions = 200, .seed = 42, .count = 1};
  std::uint64_t i = 0;
  for (auto _ : state) {
    pcfg::Xoshiro256 rng = pcfg::Xoshiro256::stream(cfg.seed, i++);
    benchmark::DoNotOptimize(pcfg::generate_tree(g, cfg, rng));
  }
}
BENCHMARK(BM_GenerateInverted);

void BM_KsCompare(benchmark::State& state) {
  pcfg::Grammar g = pcfg::parse_grammar(kArith);
  pcfg::Grammar lg = learned();
  pcfg::GeneratorConfig cfg{.max_expansions = 40, .seed = 7, .count = 100};
  std::vector<std::string> a, b;
  for (auto& gi : pcfg::generate_suite(lg, cfg)) a.push_back(gi.text);
  cfg.seed = 8;
  for (auto& gi : pcfg::generate_suite(pcfg::invert(lg), cfg))
    b.push_back(gi.text);
  pcfg::FrequencyDistribution da = pcfg::suite_distribution(g, a);
  pcfg::FrequencyDistribution db = pcfg::suite_distribution(g, b);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        pcfg::ks_compare(da, db, static_cast<int>(state.range(0)), 1));
}
BENCHMARK(BM_KsCompare)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
