// Acceptance suite: ten end-to-end checks covering translation, counting,
// decomposition, caching, the analytics layer and the command-line tool.
// Prints one PASS/FAIL line per criterion; the exit status is the number
// of failed criteria.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dagcount/cnf.hpp"
#include "dagcount/counter.hpp"
#include "dagcount/oracle.hpp"
#include "dagcount/parse.hpp"
#include "dagcount/product.hpp"
#include "dagcount/synthetic.hpp"

#include "random_formula.hpp"
#include "subprocess.hpp"

using namespace dagcount;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kCli = DAGCOUNT_CLI_PATH;
const std::string kData = DAGCOUNT_TEST_DATA_DIR;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

std::string read_data_file(const std::string& name) {
  std::ifstream in(kData + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

mpz_class count_cnf(const CnfDocument& doc) {
  Arena arena;
  DimacsFile file = parse_dimacs(write_dimacs(doc), arena);
  return *count_models(arena, file.formula, arena.all_vars()).count;
}

// 1. The worked translation example: 5 models; the implication variant has
//    4 clauses and count 6, the equivalence variant 7 clauses and count 5.
Check criterion_translation() {
  Check c;
  Arena arena;
  NodeRef f = parse_formula("a | (b & c)", arena);
  VarSet scope = arena.all_vars();
  c.expect(*count_models(arena, f, scope).count == 5, "direct count != 5");

  CnfDocument impl = tseitin_implication(arena, f, scope);
  c.expect(impl.clauses.size() == 4, "implication variant clause count != 4");
  c.expect(count_cnf(impl) == 6, "implication variant count != 6");

  CnfDocument equiv = tseitin_equivalence(arena, f, scope);
  c.expect(equiv.clauses.size() == 7, "equivalence variant clause count != 7");
  c.expect(count_cnf(equiv) == 5, "equivalence variant count != 5");
  return c;
}

// 2. The toy documentation: total, forced options, frequency and both
//    order verdicts.
Check criterion_toy_documentation() {
  Check c;
  ProductDocumentation doc = parse_documentation(read_data_file("toy.pof"));
  c.expect(*total_configurations(doc).count == 16, "total != 16");

  std::vector<Literal> e3{{*doc.find_code("e3"), true}};
  c.expect(*count_with_options(doc, e3).count == 4, "count with e3 != 4");

  Frequency freq = option_frequency(doc, *doc.find_code("e1"));
  c.expect(freq.numerator == 6 && freq.denominator == 16, "freq(e1) != 6/16");

  Verdict good = process_order(doc, parse_order("e3 g1", doc));
  bool has_a2 = false;
  for (Var v : good.supplemented) has_a2 |= v == *doc.find_code("a2");
  c.expect(good.constructible && has_a2,
           "order {e3,g1} not constructible with a2 supplemented");

  Verdict bad = process_order(doc, parse_order("e1 e2", doc));
  c.expect(!bad.constructible, "order {e1,e2} not refused");
  return c;
}

// 3. 1000 mixed random formulas, up to 18 variables, nesting depth <= 6:
//    the search counter equals the enumeration oracle, with the component
//    cache enabled and disabled.
Check criterion_random_vs_oracle() {
  Check c;
  CounterConfig cached, uncached;
  uncached.cache_capacity = 0;
  for (uint64_t seed = 0; seed < 1000 && c.ok; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(3 + seed % 16);
    VarSet scope = gen.scope();
    mpz_class expected = enumerate_count(arena, f, scope);
    if (*count_models(arena, f, scope, cached).count != expected)
      c.expect(false, "cached count mismatch at seed " + std::to_string(seed));
    else if (*count_models(arena, f, scope, uncached).count != expected)
      c.expect(false, "uncached count mismatch at seed " + std::to_string(seed));
  }
  return c;
}

// 4. 200 random formulas, up to 12 variables: the equivalence translation
//    preserves the count exactly; the implication variant never loses a
//    model.
Check criterion_translation_counts() {
  Check c;
  for (uint64_t seed = 5000; seed < 5200 && c.ok; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(3 + seed % 10);
    VarSet scope = gen.scope();
    mpz_class expected = enumerate_count(arena, f, scope);

    mpz_class equiv = count_cnf(tseitin_equivalence(arena, f, scope));
    if (equiv != expected) {
      c.expect(false, "equivalence count mismatch at seed " + std::to_string(seed));
      break;
    }
    mpz_class impl = count_cnf(tseitin_implication(arena, f, scope));
    c.expect(impl >= expected,
             "implication count lost models at seed " + std::to_string(seed));
  }
  return c;
}

// 5. 100 conjunctions of variable-disjoint blocks: the count equals the
//    product of the per-block oracle counts and the search must split.
Check criterion_components() {
  Check c;
  for (uint64_t seed = 9000; seed < 9100 && c.ok; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed, {.max_depth = 4});
    size_t blocks = 2 + gen.rng()() % 3;
    std::vector<NodeRef> parts;
    mpz_class product = 1;
    VarSet scope;
    for (size_t b = 0; b < blocks; ++b) {
      std::string prefix = "blk" + std::to_string(b) + "_";
      NodeRef block = 0;
      for (;;) {  // blocks must be non-constant and free of root forcing
        block = gen.generate(2 + gen.rng()() % 5, prefix);
        if (arena.is_const(block)) continue;
        Propagation p = propagate(arena, block, {});
        if (!p.conflict && p.forced.empty()) break;
      }
      parts.push_back(block);
      product *= enumerate_count(arena, block, gen.scope());
      scope.insert(scope.end(), gen.scope().begin(), gen.scope().end());
    }
    normalize_var_set(scope);
    NodeRef f = arena.mk_and(parts);

    CountResult r = count_models(arena, f, scope);
    if (*r.count != product)
      c.expect(false, "product mismatch at seed " + std::to_string(seed));
    else
      c.expect(r.stats.component_splits >= 1,
               "no component split at seed " + std::to_string(seed));
  }
  return c;
}

// 6. On the criterion-3 instances: count(f) = count(f|v=0) + count(f|v=1)
//    and count(f) + count(!f) = 2^n.
Check criterion_identities() {
  Check c;
  for (uint64_t seed = 0; seed < 1000 && c.ok; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(3 + seed % 16);
    VarSet scope = gen.scope();
    mpz_class count = *count_models(arena, f, scope).count;

    mpz_class complement = *count_models(arena, arena.mk_not(f), scope).count;
    if (count + complement != mpz_class(1) << scope.size()) {
      c.expect(false, "complement identity fails at seed " + std::to_string(seed));
      break;
    }

    Var v = scope[seed % scope.size()];
    Assignment lo, hi;
    lo.set(v, false);
    hi.set(v, true);
    VarSet rest;
    for (Var u : scope)
      if (u != v) rest.push_back(u);
    mpz_class low = *count_models(arena, arena.condition(f, lo), rest).count;
    mpz_class high = *count_models(arena, arena.condition(f, hi), rest).count;
    c.expect(low + high == count,
             "conditioning identity fails at seed " + std::to_string(seed));
  }
  return c;
}

// 7. 50 random pairs (formula, k <= 10 fresh variables): widening the
//    scope multiplies the count by exactly 2^k.
Check criterion_free_scaling() {
  Check c;
  for (uint64_t seed = 700; seed < 750 && c.ok; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(3 + seed % 8);
    VarSet scope = gen.scope();
    mpz_class base = *count_models(arena, f, scope).count;

    size_t k = 1 + seed % 10;
    VarSet widened = scope;
    for (size_t i = 0; i < k; ++i)
      widened.push_back(arena.intern_var("fresh" + std::to_string(i)));
    normalize_var_set(widened);
    c.expect(*count_models(arena, f, widened).count == base << k,
             "free-variable scaling fails at seed " + std::to_string(seed));
  }
  return c;
}

// 8. A synthetic documentation of ~1500 codes parses, counts within the
//    ten-minute budget and matches the analytic product.
Check criterion_synthetic_scale(double* seconds) {
  Check c;
  SyntheticDoc doc = generate_synthetic_documentation(2026, 1500);
  c.expect(doc.code_count >= 1500, "generator fell short of 1500 codes");

  auto start = Clock::now();
  ProductDocumentation parsed = parse_documentation(doc.text);
  CountResult r = total_configurations(parsed);
  *seconds = std::chrono::duration<double>(Clock::now() - start).count();

  c.expect(r.status == CountStatus::Complete, "count did not complete");
  if (r.count) c.expect(*r.count == doc.expected_count, "count != analytic product");
  c.expect(*seconds < 600.0, "exceeded the ten-minute budget");
  return c;
}

// 9. Redundancy and version comparison on the toy documentation: an
//    entailed constraint is reported redundant; forbidding a1 halves the
//    configuration space.
Check criterion_analytics_verdicts() {
  Check c;
  ProductDocumentation doc = parse_documentation(read_data_file("toy.pof"));
  NodeRef entailed = parse_formula("e1 -> g1", *doc.arena);
  c.expect(redundancy_check(doc, entailed).redundant,
           "entailed constraint not reported redundant");

  ProductDocumentation strict = parse_documentation(read_data_file("toy_strict.pof"));
  QualityReport report = compare_versions(doc, strict, {});
  c.expect(report.complete, "comparison did not complete");
  c.expect(report.ratio.has_value() && *report.ratio == 2, "ratio != 2/1");
  return c;
}

// 10. Two identical tool invocations emit byte-identical reports once the
//     wall-clock fields are removed.
Check criterion_determinism() {
  Check c;
  auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      if (line.find("wall_ms") != std::string::npos) continue;
      if (line.find("elapsed_seconds") != std::string::npos) continue;
      out << line << "\n";
    }
    return out.str();
  };
  for (std::string cmd :
       {kCli + " count " + kData + "/example.bool --json",
        kCli + " analyze " + kData + "/toy.pof total --json",
        kCli + " analyze " + kData + "/toy.pof freq e1 --json"}) {
    testing::RunOutput first = testing::run_command(cmd);
    testing::RunOutput second = testing::run_command(cmd);
    c.expect(first.exit_code == second.exit_code, "exit codes differ: " + cmd);
    c.expect(!first.out.empty() && strip(first.out) == strip(second.out),
             "reports differ: " + cmd);
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* summary;
    std::function<Check(double*)> run;
    double budget_seconds;  // 0: no explicit budget
  };

  auto timed = [](std::function<Check()> f) {
    return [f](double*) { return f(); };
  };

  std::vector<Criterion> criteria = {
      {"worked example: counts 5/6/5, clauses 4/7", timed(criterion_translation), 1.0},
      {"toy documentation: totals, frequency, order verdicts",
       timed(criterion_toy_documentation), 1.0},
      {"1000 random formulas match the oracle, cache on and off",
       timed(criterion_random_vs_oracle), 300.0},
      {"200 translations: equivalence exact, implication dominates",
       timed(criterion_translation_counts), 0.0},
      {"100 disjoint-block conjunctions multiply and split",
       timed(criterion_components), 0.0},
      {"conditioning and complement identities on the same instances",
       timed(criterion_identities), 0.0},
      {"50 widened scopes scale by exactly 2^k", timed(criterion_free_scaling), 0.0},
      {"synthetic documentation with 1500 codes counts exactly",
       criterion_synthetic_scale, 600.0},
      {"entailed constraint redundant; version ratio 2/1",
       timed(criterion_analytics_verdicts), 0.0},
      {"byte-identical reports modulo time fields", timed(criterion_determinism), 0.0},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = Clock::now();
    double inner_seconds = 0.0;
    Check result = criteria[i].run(&inner_seconds);
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (criteria[i].budget_seconds > 0 && elapsed > criteria[i].budget_seconds) {
      result.ok = false;
      result.detail = "exceeded the " + std::to_string(criteria[i].budget_seconds) +
                      "s budget";
    }
    std::printf("criterion %2zu: %s  %s (%.2fs)%s%s\n", i + 1,
                result.ok ? "PASS" : "FAIL", criteria[i].summary, elapsed,
                result.detail.empty() ? "" : " -- ", result.detail.c_str());
    failures += result.ok ? 0 : 1;
  }
  std::printf("%d of %zu acceptance criteria satisfied\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
