#include <chrono>
#include <random>
#include <vector>

#include "doctest.h"

#include "dagcount/counter.hpp"
#include "dagcount/formula.hpp"
#include "dagcount/oracle.hpp"
#include "dagcount/parse.hpp"

#include "random_formula.hpp"

using namespace dagcount;

namespace {

CountResult count_str(Arena& arena, const char* text, CounterConfig cfg = {}) {
  NodeRef f = parse_formula(text, arena);
  return count_models(arena, f, arena.all_vars(), cfg);
}

bool stats_equal_ignoring_time(const CounterStats& x, const CounterStats& y) {
  return x.decisions == y.decisions && x.propagations == y.propagations &&
         x.conflicts == y.conflicts && x.component_splits == y.component_splits &&
         x.cache_lookups == y.cache_lookups && x.cache_hits == y.cache_hits &&
         x.peak_cache_entries == y.peak_cache_entries;
}

}  // namespace

TEST_SUITE_BEGIN("counter");

TEST_CASE("the running example counts 5 with one decision") {
  Arena arena;
  CountResult r = count_str(arena, "a | (b & c)");
  REQUIRE(r.count.has_value());
  CHECK(*r.count == 5);
  CHECK(r.scope_size == 3);
  CHECK(r.status == CountStatus::Complete);
  CHECK(r.stats.decisions == 1);
  CHECK(r.stats.propagations == 2);
  CHECK(r.stats.conflicts == 0);
}

TEST_CASE("constants and literals") {
  Arena arena;
  CHECK(*count_models(arena, arena.true_node(), {}).count == 1);
  CHECK(*count_models(arena, arena.false_node(), {}).count == 0);
  Var a = arena.intern_var("a"), b = arena.intern_var("b");
  CHECK(*count_models(arena, arena.true_node(), {a, b}).count == 4);
  CHECK(*count_models(arena, arena.var_node(a), {a, b}).count == 2);
  CHECK(*count_models(arena, arena.literal_node(a, false), {a}).count == 1);
}

TEST_CASE("free scope variables double the count") {
  Arena arena;
  NodeRef f = parse_formula("a | b", arena);
  VarSet scope = arena.all_vars();
  mpz_class base = *count_models(arena, f, scope).count;
  CHECK(base == 3);
  for (int k = 1; k <= 5; ++k) {
    scope.push_back(arena.intern_var("free" + std::to_string(k)));
    normalize_var_set(scope);
    CHECK(*count_models(arena, f, scope).count == base << k);
  }
}

TEST_CASE("scope must cover the formula") {
  Arena arena;
  NodeRef f = parse_formula("a & b", arena);
  Var a = *arena.find_var("a");
  CHECK_THROWS_AS(count_models(arena, f, VarSet{a}), Error);
}

TEST_CASE("propagation forces literals through gate rules") {
  Arena arena;
  NodeRef f = parse_formula("a & !b & c", arena);
  Propagation p = propagate(arena, f, {});
  CHECK(!p.conflict);
  REQUIRE(p.forced.size() == 3);
  CHECK(p.forced[0].var == *arena.find_var("a"));
  CHECK(p.forced[0].value == true);
  CHECK(p.forced[1].value == false);
  CHECK(p.forced[2].value == true);

  // Last-unknown-child rule on a disjunction.
  Arena arena2;
  NodeRef g = parse_formula("a | b", arena2);
  Literal assume{*arena2.find_var("a"), false};
  Propagation q = propagate(arena2, g, std::span(&assume, 1));
  CHECK(!q.conflict);
  REQUIRE(q.forced.size() == 1);  // assumptions are not echoed back
  CHECK(q.forced[0].var == *arena2.find_var("b"));
  CHECK(q.forced[0].value == true);
}

TEST_CASE("propagation cascades through nested gates") {
  Arena arena;
  NodeRef f = parse_formula("(a <-> b) & a", arena);
  Propagation p = propagate(arena, f, {});
  CHECK(!p.conflict);
  REQUIRE(p.forced.size() == 2);
  CHECK(p.forced[0].value == true);  // a
  CHECK(p.forced[1].value == true);  // b
}

TEST_CASE("propagation detects conflicts") {
  Arena arena;
  Var a = arena.intern_var("a");
  NodeRef f = arena.mk_and({arena.var_node(a), arena.mk_not(arena.var_node(a))});
  Propagation p = propagate(arena, f, {});
  CHECK(p.conflict);
  CHECK(p.forced.empty());

  NodeRef g = arena.var_node(a);
  Literal assume{a, false};
  CHECK(propagate(arena, g, std::span(&assume, 1)).conflict);
}

TEST_CASE("decompose splits variable-disjoint conjuncts") {
  Arena arena;
  NodeRef f = parse_formula("(a | b) & (c | d)", arena);
  std::vector<NodeRef> parts = decompose(arena, f);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == parse_formula("a | b", arena));
  CHECK(parts[1] == parse_formula("c | d", arena));

  // Shared variables merge groups transitively.
  Arena arena2;
  NodeRef g = parse_formula("(a | b) & (b | c) & (d | e)", arena2);
  std::vector<NodeRef> groups = decompose(arena2, g);
  REQUIRE(groups.size() == 2);
  CHECK(arena2.vars_of(groups[0]).size() == 3);
  CHECK(arena2.vars_of(groups[1]).size() == 2);
}

TEST_CASE("decompose orders components by smallest variable") {
  Arena arena;
  // Declare d,c,b,a in reverse so declaration order disagrees with ids.
  NodeRef f = parse_formula("(c | d) & (a | b)", arena);
  std::vector<NodeRef> parts = decompose(arena, f);
  REQUIRE(parts.size() == 2);
  CHECK(arena.vars_of(parts[0])[0] < arena.vars_of(parts[1])[0]);
}

TEST_CASE("non-conjunctions are a single component") {
  Arena arena;
  NodeRef f = parse_formula("(a & b) | (c & d)", arena);
  std::vector<NodeRef> parts = decompose(arena, f);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0] == f);
}

TEST_CASE("component keys separate structure, variables and free counts") {
  Arena arena;
  NodeRef f = parse_formula("a | (b & c)", arena);
  NodeRef g = parse_formula("x | (b & c)", arena);
  NodeRef h = parse_formula("a & (b | c)", arena);
  CHECK(component_key(arena, f, 0) == component_key(arena, f, 0));
  CHECK(component_key(arena, f, 0) != component_key(arena, f, 1));
  CHECK(component_key(arena, f, 0) != component_key(arena, g, 0));
  CHECK(component_key(arena, f, 0) != component_key(arena, h, 0));

  // Identical structure built twice hash-conses to one ref, hence one key.
  NodeRef f2 = parse_formula("(b & c) | a", arena);
  CHECK(component_key(arena, f2, 3) == component_key(arena, f, 3));
}

TEST_CASE("cache capacity bounds the live entries") {
  Arena arena;
  testing::FormulaGen gen(arena, 4242);
  NodeRef f = gen.generate_nonconstant(12);

  CounterConfig unbounded;
  CountResult full = count_models(arena, f, gen.scope(), unbounded);

  CounterConfig tiny;
  tiny.cache_capacity = 2;
  CountResult capped = count_models(arena, f, gen.scope(), tiny);
  CHECK(capped.stats.peak_cache_entries <= 2);
  CHECK(*capped.count == *full.count);

  CounterConfig off;
  off.cache_capacity = 0;
  CountResult disabled = count_models(arena, f, gen.scope(), off);
  CHECK(disabled.stats.cache_lookups == 0);
  CHECK(disabled.stats.cache_hits == 0);
  CHECK(disabled.stats.peak_cache_entries == 0);
  CHECK(*disabled.count == *full.count);
}

TEST_CASE("caching pays off somewhere in a seeded batch") {
  uint64_t total_hits = 0;
  for (uint64_t seed = 0; seed < 80; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(4 + seed % 7);
    CountResult r = count_models(arena, f, gen.scope());
    CHECK(*r.count == enumerate_count(arena, f, gen.scope()));
    total_hits += r.stats.cache_hits;
  }
  CHECK(total_hits > 0);
}

TEST_CASE("identical runs produce identical statistics") {
  Arena arena;
  testing::FormulaGen gen(arena, 99);
  NodeRef f = gen.generate_nonconstant(14);
  CountResult r1 = count_models(arena, f, gen.scope());
  CountResult r2 = count_models(arena, f, gen.scope());
  CHECK(*r1.count == *r2.count);
  CHECK(stats_equal_ignoring_time(r1.stats, r2.stats));
}

TEST_CASE("all branch heuristics agree on the count") {
  for (uint64_t seed = 10; seed < 30; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(10);
    VarSet scope = gen.scope();
    CounterConfig occ, tie, low;
    occ.heuristic = BranchHeuristic::OccurrenceCount;
    tie.heuristic = BranchHeuristic::OccurrenceRandomTies;
    tie.seed = seed * 31 + 7;
    low.heuristic = BranchHeuristic::LowestId;
    mpz_class base = *count_models(arena, f, scope, occ).count;
    CHECK(*count_models(arena, f, scope, tie).count == base);
    CHECK(*count_models(arena, f, scope, low).count == base);
  }
}

TEST_CASE("heuristic names round-trip") {
  for (BranchHeuristic h :
       {BranchHeuristic::OccurrenceCount, BranchHeuristic::OccurrenceRandomTies,
        BranchHeuristic::LowestId})
    CHECK(branch_heuristic_from_name(branch_heuristic_name(h)) == h);
  CHECK(!branch_heuristic_from_name("bogus").has_value());
}

TEST_CASE("assumptions restrict the count without shrinking the scope") {
  Arena arena;
  NodeRef f = parse_formula("a | (b & c)", arena);
  VarSet scope = arena.all_vars();
  Var a = *arena.find_var("a"), b = *arena.find_var("b");

  std::vector<Literal> pos{{a, true}};
  CHECK(*count_with_assumptions(arena, f, scope, pos).count == 4);
  std::vector<Literal> neg{{a, false}};
  CHECK(*count_with_assumptions(arena, f, scope, neg).count == 1);
  std::vector<Literal> two{{a, true}, {b, false}};
  CHECK(*count_with_assumptions(arena, f, scope, two).count == 2);

  // count(f) = count(f | l) + count(f | !l)
  CHECK(*count_with_assumptions(arena, f, scope, pos).count +
            *count_with_assumptions(arena, f, scope, neg).count ==
        *count_models(arena, f, scope).count);
}

TEST_CASE("contradictory assumptions short-circuit") {
  Arena arena;
  NodeRef f = parse_formula("a | b", arena);
  Var a = *arena.find_var("a");
  std::vector<Literal> clash{{a, true}, {a, false}};
  CountResult r = count_with_assumptions(arena, f, arena.all_vars(), clash);
  CHECK(r.trivially_inconsistent);
  CHECK(*r.count == 0);
  CHECK(r.status == CountStatus::Complete);
  CHECK(r.stats.decisions == 0);
}

TEST_CASE("assumptions outside the scope are rejected") {
  Arena arena;
  NodeRef f = parse_formula("a | b", arena);
  VarSet scope = arena.all_vars();
  Var z = arena.intern_var("z");
  std::vector<Literal> bad{{z, true}};
  CHECK_THROWS_AS(count_with_assumptions(arena, f, scope, bad), Error);
}

TEST_CASE("a timeout aborts with no count") {
  Arena arena;
  // A conjunction of random ternary disjunctions large enough to require
  // search, so the deadline check before the first decisions fires.
  std::mt19937_64 rng(5);
  std::vector<NodeRef> vars;
  for (int i = 0; i < 24; ++i)
    vars.push_back(arena.var_node(arena.intern_var("t" + std::to_string(i))));
  std::vector<NodeRef> clauses;
  for (int i = 0; i < 72; ++i) {
    std::vector<NodeRef> lits;
    for (int j = 0; j < 3; ++j) {
      NodeRef v = vars[rng() % vars.size()];
      lits.push_back(rng() % 2 ? v : arena.mk_not(v));
    }
    clauses.push_back(arena.mk_or(lits));
  }
  NodeRef f = arena.mk_and(clauses);

  CounterConfig cfg;
  cfg.timeout = std::chrono::duration<double>(1e-9);
  CountResult r = count_models(arena, f, arena.all_vars(), cfg);
  CHECK(r.status == CountStatus::Timeout);
  CHECK(!r.count.has_value());

  CounterConfig open;
  CountResult done = count_models(arena, f, arena.all_vars(), open);
  CHECK(done.status == CountStatus::Complete);
  CHECK(done.count.has_value());
}

TEST_CASE("counter matches the oracle on mixed random formulas") {
  for (uint64_t seed = 500; seed < 650; ++seed) {
    Arena arena;
    testing::FormulaGen gen(arena, seed);
    NodeRef f = gen.generate(3 + seed % 12);
    VarSet scope = gen.scope();
    mpz_class expected = enumerate_count(arena, f, scope);
    CHECK(*count_models(arena, f, scope).count == expected);
  }
}

TEST_SUITE_END();
