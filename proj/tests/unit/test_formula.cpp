#include <random>
#include <vector>

#include "doctest.h"

#include "dagcount/formula.hpp"
#include "dagcount/oracle.hpp"
#include "dagcount/parse.hpp"

using namespace dagcount;

namespace {

struct Fixture {
  Arena arena;
  Var a, b, c, d;
  NodeRef va, vb, vc, vd;

  Fixture() {
    a = arena.intern_var("a");
    b = arena.intern_var("b");
    c = arena.intern_var("c");
    d = arena.intern_var("d");
    va = arena.var_node(a);
    vb = arena.var_node(b);
    vc = arena.var_node(c);
    vd = arena.var_node(d);
  }
};

}  // namespace

TEST_SUITE_BEGIN("formula");

TEST_CASE("variable pool interns names once and rejects reserved words") {
  Arena arena;
  Var x = arena.intern_var("x");
  CHECK(arena.intern_var("x") == x);
  CHECK(arena.var_count() == 1);
  CHECK(arena.var_name(x) == "x");
  CHECK(arena.find_var("x") == x);
  CHECK(!arena.find_var("y").has_value());
  CHECK_THROWS_AS(arena.intern_var("true"), Error);
  CHECK_THROWS_AS(arena.intern_var("false"), Error);
}

TEST_CASE("hash consing gives one ref per structure") {
  Fixture f;
  NodeRef x1 = f.arena.mk_and({f.va, f.vb});
  NodeRef x2 = f.arena.mk_and({f.vb, f.va});  // operand order is canonical
  CHECK(x1 == x2);
  NodeRef y1 = f.arena.mk_or({x1, f.vc});
  NodeRef y2 = f.arena.mk_or({f.vc, f.arena.mk_and({f.va, f.vb})});
  CHECK(y1 == y2);
  size_t before = f.arena.node_count();
  f.arena.mk_or({f.vc, x1});
  CHECK(f.arena.node_count() == before);  // no new node for a repeat
}

TEST_CASE("smart constructors fold constants") {
  Fixture f;
  NodeRef t = f.arena.true_node(), bot = f.arena.false_node();
  CHECK(f.arena.mk_and({f.va, t}) == f.va);          // identity dropped
  CHECK(f.arena.mk_and({f.va, bot}) == bot);         // dominator wins
  CHECK(f.arena.mk_or({f.va, bot}) == f.va);
  CHECK(f.arena.mk_or({f.va, t}) == t);
  CHECK(f.arena.mk_and({t, t}) == t);                // empty conjunction
  CHECK(f.arena.mk_or({bot, bot}) == bot);           // empty disjunction
  CHECK(f.arena.mk_not(t) == bot);
  CHECK(f.arena.mk_not(bot) == t);
}

TEST_CASE("smart constructors flatten, deduplicate and collapse") {
  Fixture f;
  NodeRef ab = f.arena.mk_and({f.va, f.vb});
  NodeRef flat = f.arena.mk_and({ab, f.vc});
  CHECK(flat == f.arena.mk_and({f.va, f.vb, f.vc}));  // And-in-And flattened
  CHECK(f.arena.mk_and({f.va, f.va}) == f.va);        // duplicates collapse
  CHECK(f.arena.mk_or({f.va}) == f.va);               // arity 1 is the child
  CHECK(f.arena.mk_not(f.arena.mk_not(f.va)) == f.va);
  // Or-in-And is preserved: only like kinds flatten.
  NodeRef ab_or = f.arena.mk_or({f.va, f.vb});
  NodeRef mixed = f.arena.mk_and({ab_or, f.vc});
  CHECK(f.arena.node(mixed).kind == NodeKind::And);
  CHECK(f.arena.node(mixed).operands.size() == 2);
}

TEST_CASE("implication and equivalence are eliminated at construction") {
  Fixture f;
  CHECK(f.arena.mk_implies(f.va, f.vb) ==
        f.arena.mk_or({f.arena.mk_not(f.va), f.vb}));
  CHECK(f.arena.mk_iff(f.va, f.vb) ==
        f.arena.mk_and({f.arena.mk_or({f.arena.mk_not(f.va), f.vb}),
                        f.arena.mk_or({f.arena.mk_not(f.vb), f.va})}));
  CHECK(f.arena.mk_implies(f.arena.true_node(), f.vb) == f.vb);
  // No complement rule in the constructors: a <-> a keeps its shape (the
  // propagation engine handles tautologies), but it is still a tautology.
  NodeRef taut = f.arena.mk_iff(f.va, f.va);
  Assignment s;
  s.set(f.a, false);
  CHECK(f.arena.evaluate(taut, s));
  s.set(f.a, true);
  CHECK(f.arena.evaluate(taut, s));
}

TEST_CASE("vars_of tracks reachable variables") {
  Fixture f;
  NodeRef g = f.arena.mk_or({f.arena.mk_and({f.va, f.vc}), f.arena.mk_not(f.vb)});
  CHECK(f.arena.vars_of(g) == VarSet{f.a, f.b, f.c});
  CHECK(f.arena.vars_of(f.arena.true_node()).empty());
  CHECK(f.arena.vars_of(f.arena.mk_not(f.vd)) == VarSet{f.d});
}

TEST_CASE("evaluate follows propositional semantics") {
  Fixture f;
  NodeRef g = f.arena.mk_or({f.va, f.arena.mk_and({f.vb, f.vc})});
  Assignment s;
  s.set(f.a, false);
  s.set(f.b, true);
  s.set(f.c, true);
  CHECK(f.arena.evaluate(g, s));
  s.set(f.c, false);
  CHECK(!f.arena.evaluate(g, s));
  s.set(f.a, true);
  CHECK(f.arena.evaluate(g, s));

  Assignment partial;  // consulting an unbound variable is an error
  partial.set(f.a, false);
  CHECK_THROWS_AS(f.arena.evaluate(g, partial), Error);
}

TEST_CASE("condition substitutes and re-simplifies") {
  Fixture f;
  NodeRef g = f.arena.mk_or({f.va, f.arena.mk_and({f.vb, f.vc})});
  Assignment s;
  s.set(f.a, true);
  CHECK(f.arena.condition(g, s) == f.arena.true_node());
  s.set(f.a, false);
  CHECK(f.arena.condition(g, s) == f.arena.mk_and({f.vb, f.vc}));
  s.set(f.b, true);
  CHECK(f.arena.condition(g, s) == f.vc);
  s.set(f.c, false);
  CHECK(f.arena.condition(g, s) == f.arena.false_node());

  // The result never mentions a bound variable.
  Assignment one;
  one.set(f.b, true);
  NodeRef h = f.arena.condition(g, one);
  for (Var v : f.arena.vars_of(h)) CHECK(v != f.b);
}

TEST_CASE("condition agrees with semantics while the arena grows") {
  // Conditioning builds new nodes mid-recursion; the count must match a
  // model-by-model check no matter how often the node store reallocates.
  Arena arena;
  NodeRef g = parse_formula(
      "((!d & ((!e & a) <-> (!c -> !e))) | (((!a -> !c) -> f) & ((!d <-> !d) <-> !b)))",
      arena);
  VarSet scope = arena.all_vars();
  mpz_class direct = enumerate_count(arena, g, scope);

  // Split on each variable in turn: count(g) = count(g|v=0) + count(g|v=1).
  for (Var v : scope) {
    Assignment lo, hi;
    lo.set(v, false);
    hi.set(v, true);
    NodeRef g0 = arena.condition(g, lo);
    NodeRef g1 = arena.condition(g, hi);
    VarSet rest;
    for (Var u : scope)
      if (u != v) rest.push_back(u);
    CHECK(enumerate_count(arena, g0, rest) + enumerate_count(arena, g1, rest) ==
          direct);
  }
}

TEST_CASE("reachable_size counts shared nodes once") {
  Fixture f;
  NodeRef shared = f.arena.mk_or({f.va, f.vb});
  NodeRef g = f.arena.mk_and({shared, f.arena.mk_or({shared, f.vc})});
  // nodes: g, shared, (shared|c), a, b, c
  CHECK(f.arena.reachable_size(g) == 6);
  CHECK(f.arena.reachable_size(f.va) == 1);
}

TEST_CASE("to_string emits the input grammar with minimal parentheses") {
  Arena arena;
  NodeRef g = parse_formula("!a & (b | c)", arena);
  CHECK(arena.to_string(g) == "!a & (b | c)");
  Arena arena2;
  NodeRef h = parse_formula("a | b & c", arena2);
  CHECK(arena2.to_string(h) == "a | b & c");
  CHECK(arena2.to_string(arena2.true_node()) == "true");
  CHECK(arena2.to_string(arena2.false_node()) == "false");
}

TEST_CASE("to_string round-trips through the parser") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Arena arena;
    Var names[6];
    for (int i = 0; i < 6; ++i)
      names[i] = arena.intern_var(std::string(1, static_cast<char>('a' + i)));
    std::mt19937_64 rng(seed);
    // Build a small random formula by hand to avoid a generator dependency.
    std::vector<NodeRef> pool;
    for (int i = 0; i < 6; ++i) pool.push_back(arena.var_node(names[i]));
    for (int step = 0; step < 12; ++step) {
      NodeRef x = pool[rng() % pool.size()];
      NodeRef y = pool[rng() % pool.size()];
      switch (rng() % 4) {
        case 0: pool.push_back(arena.mk_not(x)); break;
        case 1: pool.push_back(arena.mk_and({x, y})); break;
        case 2: pool.push_back(arena.mk_or({x, y})); break;
        default: pool.push_back(arena.mk_implies(x, y)); break;
      }
    }
    NodeRef g = pool.back();
    NodeRef reparsed = parse_formula(arena.to_string(g), arena);
    CHECK(reparsed == g);  // same arena: identical structure, identical ref
  }
}

TEST_CASE("normalize_var_set sorts and deduplicates") {
  VarSet vs{5, 1, 3, 1, 5};
  normalize_var_set(vs);
  CHECK(vs == VarSet{1, 3, 5});
}

TEST_SUITE_END();
