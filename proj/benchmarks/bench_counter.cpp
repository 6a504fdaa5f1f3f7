// Microbenchmarks for the counting engine and the analytics layer.
//
// Shapes covered: mixed random formulas with the component cache on and
// off, variable-disjoint conjunctions where decomposition dominates, the
// CNF translations, and synthetic product documentations end to end.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dagcount/cnf.hpp"
#include "dagcount/counter.hpp"
#include "dagcount/parse.hpp"
#include "dagcount/product.hpp"
#include "dagcount/synthetic.hpp"

#include "random_formula.hpp"

using namespace dagcount;

namespace {

// One deterministic mixed formula per (seed, vars) pair.
NodeRef make_formula(Arena& arena, uint64_t seed, size_t vars, VarSet& scope) {
  testing::FormulaGen gen(arena, seed);
  NodeRef f = gen.generate_nonconstant(vars);
  scope = gen.scope();
  return f;
}

void BM_CountRandom(benchmark::State& state) {
  const size_t vars = static_cast<size_t>(state.range(0));
  const bool cache = state.range(1) != 0;
  CounterConfig cfg;
  if (!cache) cfg.cache_capacity = 0;
  uint64_t seed = 1;
  for (auto _ : state) {
    Arena arena;
    VarSet scope;
    NodeRef f = make_formula(arena, seed++, vars, scope);
    CountResult r = count_models(arena, f, scope, cfg);
    benchmark::DoNotOptimize(r.count);
  }
}
BENCHMARK(BM_CountRandom)
    ->ArgsProduct({{12, 18, 24}, {0, 1}})
    ->ArgNames({"vars", "cache"});

void BM_CountDisjointBlocks(benchmark::State& state) {
  const size_t blocks = static_cast<size_t>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    Arena arena;
    std::vector<NodeRef> parts;
    VarSet scope;
    testing::FormulaGen gen(arena, blocks);
    for (size_t b = 0; b < blocks; ++b) {
      parts.push_back(gen.generate_nonconstant(6, "blk" + std::to_string(b) + "_"));
      scope.insert(scope.end(), gen.scope().begin(), gen.scope().end());
    }
    normalize_var_set(scope);
    NodeRef f = arena.mk_and(parts);
    state.ResumeTiming();
    CountResult r = count_models(arena, f, scope);
    benchmark::DoNotOptimize(r.count);
  }
}
BENCHMARK(BM_CountDisjointBlocks)->Arg(4)->Arg(16)->Arg(64)->ArgName("blocks");

void BM_Tseitin(benchmark::State& state) {
  Arena arena;
  VarSet scope;
  NodeRef f = make_formula(arena, 7, 20, scope);
  const bool equivalence = state.range(0) != 0;
  for (auto _ : state) {
    CnfDocument doc = equivalence ? tseitin_equivalence(arena, f, scope)
                                  : tseitin_implication(arena, f, scope);
    benchmark::DoNotOptimize(doc.clauses);
  }
}
BENCHMARK(BM_Tseitin)->Arg(0)->Arg(1)->ArgName("equiv");

void BM_Propagate(benchmark::State& state) {
  Arena arena;
  VarSet scope;
  NodeRef f = make_formula(arena, 11, static_cast<size_t>(state.range(0)), scope);
  for (auto _ : state) {
    Propagation p = propagate(arena, f, {});
    benchmark::DoNotOptimize(p.forced);
  }
}
BENCHMARK(BM_Propagate)->Arg(12)->Arg(24)->ArgName("vars");

void BM_SyntheticDocumentation(benchmark::State& state) {
  const size_t codes = static_cast<size_t>(state.range(0));
  SyntheticDoc doc = generate_synthetic_documentation(42, codes);
  for (auto _ : state) {
    ProductDocumentation parsed = parse_documentation(doc.text);
    CountResult r = total_configurations(parsed);
    benchmark::DoNotOptimize(r.count);
  }
  state.SetLabel(std::to_string(doc.code_count) + " codes");
}
BENCHMARK(BM_SyntheticDocumentation)->Arg(200)->Arg(800)->Arg(1500)->ArgName("codes");

}  // namespace

BENCHMARK_MAIN();
