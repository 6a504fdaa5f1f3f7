#pragma once

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dagcount/formula.hpp"

namespace dagcount {

struct Literal {
  Var var;
  bool value;
};

enum class CountStatus { Complete, Timeout, MemoryLimit };

enum class BranchHeuristic {
  /// Most occurrences as a direct gate literal; ties to the lowest var id.
  OccurrenceCount,
  /// Same score, ties broken by the seeded generator.
  OccurrenceRandomTies,
  /// Lowest var id, unconditionally.
  LowestId,
};

std::string_view branch_heuristic_name(BranchHeuristic h);
std::optional<BranchHeuristic> branch_heuristic_from_name(std::string_view name);

struct CounterConfig {
  std::optional<std::chrono::duration<double>> timeout;
  /// Cache entry limit: nullopt = unbounded, 0 = caching disabled.
  std::optional<uint64_t> cache_capacity;
  BranchHeuristic heuristic = BranchHeuristic::OccurrenceCount;
  uint64_t seed = 0;
};

struct CounterStats {
  uint64_t decisions = 0;
  uint64_t propagations = 0;  // literals forced without a decision
  uint64_t conflicts = 0;
  uint64_t component_splits = 0;
  uint64_t cache_lookups = 0;
  uint64_t cache_hits = 0;
  uint64_t peak_cache_entries = 0;
  double elapsed_seconds = 0.0;
};

struct CountResult {
  /// Present exactly when status == Complete.
  std::optional<mpz_class> count;
  size_t scope_size = 0;
  CounterStats stats;
  CountStatus status = CountStatus::Complete;
  /// Set when contradictory assumptions short-circuited the search.
  bool trivially_inconsistent = false;
};

/// Exact model count of `f` over `scope`, which must cover vars(f);
/// variables in the scope but not in the formula are free and double the
/// count. Identical inputs and config give identical counts and stats.
CountResult count_models(Arena& arena, NodeRef f, const VarSet& scope,
                         const CounterConfig& cfg = {});

/// Count of models of `f` that also satisfy every assumption literal.
/// A contradictory assumption pair yields zero without searching.
CountResult count_with_assumptions(Arena& arena, NodeRef f, const VarSet& scope,
                                   std::span<const Literal> assumptions,
                                   const CounterConfig& cfg = {});

struct Propagation {
  bool conflict = false;
  /// Variable values forced by the gate rules, ascending by var id;
  /// assumption variables are not repeated here. Empty on conflict.
  std::vector<Literal> forced;
};

/// Constrains `root` to true under `assumptions` and runs the gate rules
/// to fixpoint over the reachable DAG. Assumption variables that do not
/// occur under `root` are ignored.
Propagation propagate(const Arena& arena, NodeRef root,
                      std::span<const Literal> assumptions);

/// Partitions a simplified formula into connected components (conjuncts
/// grouped by shared variables), each returned as one formula. Components
/// are ordered by their smallest variable id. Non-conjunctions are a
/// single component.
std::vector<NodeRef> decompose(Arena& arena, NodeRef residual);

/// Canonical byte key for a component plus its attached free-variable
/// count: equal keys exactly when both components are structurally
/// identical over the same variable ids with the same free count.
std::string component_key(const Arena& arena, NodeRef component, uint64_t free_vars);

}  // namespace dagcount
