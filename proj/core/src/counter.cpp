#include "dagcount/counter.hpp"

#include <algorithm>
#include <cassert>
#include <list>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace dagcount {

std::string_view branch_heuristic_name(BranchHeuristic h) {
  switch (h) {
    case BranchHeuristic::OccurrenceCount: return "occ";
    case BranchHeuristic::OccurrenceRandomTies: return "occ-random";
    case BranchHeuristic::LowestId: return "lowest";
  }
  return "occ";
}

std::optional<BranchHeuristic> branch_heuristic_from_name(std::string_view name) {
  if (name == "occ") return BranchHeuristic::OccurrenceCount;
  if (name == "occ-random") return BranchHeuristic::OccurrenceRandomTies;
  if (name == "lowest") return BranchHeuristic::LowestId;
  return std::nullopt;
}

Propagation propagate(const Arena& arena, NodeRef root,
                      std::span<const Literal> assumptions) {
  Propagation result;
  if (root == arena.true_node()) return result;
  if (root == arena.false_node()) {
    result.conflict = true;
    return result;
  }

  // Snapshot the reachable sub-DAG into local indices.
  std::vector<NodeRef> order;
  std::unordered_map<NodeRef, uint32_t> index;
  std::unordered_map<Var, uint32_t> var_slot;
  {
    std::vector<NodeRef> stack{root};
    while (!stack.empty()) {
      NodeRef r = stack.back();
      stack.pop_back();
      if (index.count(r)) continue;
      index.emplace(r, static_cast<uint32_t>(order.size()));
      order.push_back(r);
      const Node& n = arena.node(r);
      if (n.kind == NodeKind::Var) var_slot.emplace(n.var, index.at(r));
      for (auto it = n.operands.rbegin(); it != n.operands.rend(); ++it)
        if (!index.count(*it)) stack.push_back(*it);
    }
  }
  const uint32_t total = static_cast<uint32_t>(order.size());

  std::vector<int8_t> value(total, -1);
  std::vector<std::vector<uint32_t>> parents(total);
  std::vector<uint32_t> unknown(total, 0);
  std::vector<uint32_t> falsified(total, 0);  // And: false children, Or: true ones
  for (uint32_t i = 0; i < total; ++i) {
    const Node& n = arena.node(order[i]);
    unknown[i] = static_cast<uint32_t>(n.operands.size());
    for (NodeRef c : n.operands) parents[index.at(c)].push_back(i);
  }

  bool conflict = false;
  std::vector<uint32_t> queue;
  queue.reserve(total);
  auto set_value = [&](uint32_t i, bool v) {
    if (conflict) return;
    if (value[i] != -1) {
      if (value[i] != static_cast<int8_t>(v)) conflict = true;
      return;
    }
    value[i] = static_cast<int8_t>(v);
    for (uint32_t p : parents[i]) {
      --unknown[p];
      const NodeKind pk = arena.node(order[p]).kind;
      bool dominates = (pk == NodeKind::And) ? !v : v;  // child value deciding the gate
      if (pk != NodeKind::Not && dominates) ++falsified[p];
    }
    queue.push_back(i);
  };

  // Fires every rule currently enabled at gate i; settings cascade through
  // the queue, so stale trigger checks are re-run when the child lands.
  auto apply_gate = [&](uint32_t i) {
    const Node& n = arena.node(order[i]);
    switch (n.kind) {
      case NodeKind::Not: {
        uint32_t c = index.at(n.operands[0]);
        if (value[i] != -1) set_value(c, value[i] == 0);
        if (value[c] != -1) set_value(i, value[c] == 0);
        break;
      }
      case NodeKind::And: {
        if (falsified[i] > 0)
          set_value(i, false);
        else if (unknown[i] == 0)
          set_value(i, true);
        if (conflict) break;
        if (value[i] == 1) {
          for (NodeRef c : n.operands) set_value(index.at(c), true);
        } else if (value[i] == 0 && unknown[i] == 1 && falsified[i] == 0) {
          for (NodeRef c : n.operands)
            if (value[index.at(c)] == -1) set_value(index.at(c), false);
        }
        break;
      }
      case NodeKind::Or: {
        if (falsified[i] > 0)
          set_value(i, true);
        else if (unknown[i] == 0)
          set_value(i, false);
        if (conflict) break;
        if (value[i] == 0) {
          for (NodeRef c : n.operands) set_value(index.at(c), false);
        } else if (value[i] == 1 && unknown[i] == 1 && falsified[i] == 0) {
          for (NodeRef c : n.operands)
            if (value[index.at(c)] == -1) set_value(index.at(c), true);
        }
        break;
      }
      default:
        break;
    }
  };

  set_value(index.at(root), true);
  std::unordered_set<Var> assumed;
  for (const Literal& lit : assumptions) {
    assumed.insert(lit.var);
    auto it = var_slot.find(lit.var);
    if (it != var_slot.end()) set_value(it->second, lit.value);
  }

  for (size_t head = 0; head < queue.size() && !conflict; ++head) {
    uint32_t i = queue[head];
    apply_gate(i);
    for (uint32_t p : parents[i]) {
      if (conflict) break;
      apply_gate(p);
    }
  }

  if (conflict) {
    result.conflict = true;
    return result;
  }
  for (uint32_t i = 0; i < total; ++i) {
    const Node& n = arena.node(order[i]);
    if (n.kind == NodeKind::Var && value[i] != -1 && !assumed.count(n.var))
      result.forced.push_back({n.var, value[i] == 1});
  }
  std::sort(result.forced.begin(), result.forced.end(),
            [](const Literal& a, const Literal& b) { return a.var < b.var; });
  return result;
}

std::vector<NodeRef> decompose(Arena& arena, NodeRef residual) {
  const Node& top = arena.node(residual);
  if (top.kind != NodeKind::And) return {residual};
  // mk_and below may reallocate the node table; copy the operand list.
  std::vector<NodeRef> conjuncts = top.operands;
  const size_t k = conjuncts.size();

  // Union-find over conjuncts, merged through shared variables.
  std::vector<uint32_t> parent(k);
  for (uint32_t i = 0; i < k; ++i) parent[i] = i;
  auto find = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_map<Var, uint32_t> owner;
  for (uint32_t i = 0; i < k; ++i)
    for (Var v : arena.vars_of(conjuncts[i])) {
      auto [it, fresh] = owner.emplace(v, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }

  std::vector<std::vector<NodeRef>> groups;
  std::unordered_map<uint32_t, size_t> group_of;
  for (uint32_t i = 0; i < k; ++i) {
    uint32_t r = find(i);
    auto [it, fresh] = group_of.emplace(r, groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(conjuncts[i]);
  }

  std::vector<NodeRef> components;
  components.reserve(groups.size());
  for (const auto& g : groups)
    components.push_back(g.size() == 1 ? g[0] : arena.mk_and(g));
  std::sort(components.begin(), components.end(), [&](NodeRef a, NodeRef b) {
    return arena.vars_of(a)[0] < arena.vars_of(b)[0];
  });
  return components;
}

namespace {

void append_varint(std::string& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

}  // namespace

std::string component_key(const Arena& arena, NodeRef component, uint64_t free_vars) {
  std::string out;
  append_varint(out, free_vars);
  // Post-order serialization with local indices: a collision-free shape +
  // variable-id encoding independent of arena node numbering.
  std::unordered_map<NodeRef, uint32_t> local;
  std::vector<std::pair<NodeRef, bool>> stack{{component, false}};
  while (!stack.empty()) {
    auto [r, expanded] = stack.back();
    stack.pop_back();
    if (local.count(r)) continue;
    const Node& n = arena.node(r);
    if (!expanded) {
      stack.push_back({r, true});
      for (auto it = n.operands.rbegin(); it != n.operands.rend(); ++it)
        if (!local.count(*it)) stack.push_back({*it, false});
      continue;
    }
    out.push_back(static_cast<char>(n.kind));
    if (n.kind == NodeKind::Var) {
      append_varint(out, n.var);
    } else {
      append_varint(out, n.operands.size());
      for (NodeRef c : n.operands) append_varint(out, local.at(c));
    }
    local.emplace(r, static_cast<uint32_t>(local.size()));
  }
  return out;
}

namespace {

class ComponentCache {
 public:
  explicit ComponentCache(std::optional<uint64_t> capacity) : capacity_(capacity) {}

  bool enabled() const { return !capacity_ || *capacity_ > 0; }

  const mpz_class* lookup(const std::string& key) {
    auto it = index_.find(std::string_view(key));
    if (it == index_.end()) return nullptr;
    items_.splice(items_.begin(), items_, it->second);  // refresh recency
    return &items_.front().second;
  }

  void store(std::string&& key, const mpz_class& value) {
    if (index_.count(std::string_view(key))) return;
    items_.emplace_front(std::move(key), value);
    index_.emplace(std::string_view(items_.front().first), items_.begin());
    if (capacity_ && items_.size() > *capacity_) {
      index_.erase(std::string_view(items_.back().first));
      items_.pop_back();
    }
    peak_ = std::max<uint64_t>(peak_, items_.size());
  }

  uint64_t peak() const { return peak_; }

 private:
  std::optional<uint64_t> capacity_;
  std::list<std::pair<std::string, mpz_class>> items_;  // front = most recent
  std::unordered_map<std::string_view, std::list<std::pair<std::string, mpz_class>>::iterator>
      index_;
  uint64_t peak_ = 0;
};

struct TimeoutAbort {};

class Engine {
 public:
  Engine(Arena& arena, const CounterConfig& cfg)
      : arena_(arena), cfg_(cfg), cache_(cfg.cache_capacity), rng_(cfg.seed) {}

  CountResult run(NodeRef f, const VarSet& scope) {
    auto start = std::chrono::steady_clock::now();
    if (cfg_.timeout) {
      deadline_ = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              *cfg_.timeout);
      has_deadline_ = true;
    }
    const VarSet& used = arena_.vars_of(f);
    if (!std::includes(scope.begin(), scope.end(), used.begin(), used.end()))
      throw Error("formula mentions variables outside the requested scope");

    CountResult result;
    result.scope_size = scope.size();
    try {
      result.count = count_scoped(f, scope.size() - used.size());
    } catch (const TimeoutAbort&) {
      result.status = CountStatus::Timeout;
    }
    stats_.peak_cache_entries = cache_.peak();
    stats_.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.stats = stats_;
    return result;
  }

 private:
  mpz_class count_scoped(NodeRef r, uint64_t n_free) {
    if (r == arena_.false_node()) return 0;
    if (r == arena_.true_node()) return mpz_class(1) << n_free;
    std::vector<NodeRef> components = decompose(arena_, r);
    if (components.size() == 1) return cached_component(r, n_free);
    ++stats_.component_splits;
    mpz_class result = mpz_class(1) << n_free;
    for (NodeRef c : components) {
      result *= cached_component(c, 0);
      if (result == 0) break;
    }
    return result;
  }

  mpz_class cached_component(NodeRef c, uint64_t n_free) {
    if (!cache_.enabled()) {
      mpz_class v = count_component(c);
      if (n_free) v <<= n_free;
      return v;
    }
    std::string key = component_key(arena_, c, n_free);
    ++stats_.cache_lookups;
    if (const mpz_class* hit = cache_.lookup(key)) {
      ++stats_.cache_hits;
      return *hit;
    }
    mpz_class v = count_component(c);
    if (n_free) v <<= n_free;
    cache_.store(std::move(key), v);
    return v;
  }

  // One component, root constrained to true. Forced literals are consumed
  // without a decision; otherwise branch on one variable, low value first.
  mpz_class count_component(NodeRef c) {
    Propagation initial = propagate(arena_, c, {});
    stats_.propagations += initial.forced.size();
    if (initial.conflict) {
      ++stats_.conflicts;
      return 0;
    }
    const size_t scope_vars = arena_.vars_of(c).size();
    if (!initial.forced.empty()) {
      Assignment a;
      for (const Literal& lit : initial.forced) a.set(lit.var, lit.value);
      NodeRef residual = arena_.condition(c, a);
      uint64_t n_free = scope_vars - a.size() - arena_.vars_of(residual).size();
      return count_scoped(residual, n_free);
    }

    check_deadline();
    ++stats_.decisions;
    Var x = select_branch_var(c);
    mpz_class total = 0;
    for (bool v : {false, true}) {
      Literal assume{x, v};
      Propagation prop = propagate(arena_, c, std::span(&assume, 1));
      stats_.propagations += prop.forced.size();
      if (prop.conflict) {
        ++stats_.conflicts;
        continue;
      }
      Assignment a;
      a.set(x, v);
      for (const Literal& lit : prop.forced) a.set(lit.var, lit.value);
      NodeRef residual = arena_.condition(c, a);
      uint64_t n_free = scope_vars - a.size() - arena_.vars_of(residual).size();
      total += count_scoped(residual, n_free);
    }
    return total;
  }

  // Occurrence score: in how many distinct gates the variable appears as a
  // direct literal (plain or negated).
  Var select_branch_var(NodeRef c) {
    const VarSet& vars = arena_.vars_of(c);
    assert(!vars.empty());
    if (cfg_.heuristic == BranchHeuristic::LowestId) return vars[0];

    std::unordered_map<Var, uint32_t> score;
    std::vector<NodeRef> stack{c};
    std::unordered_set<NodeRef> seen{c};
    std::vector<Var> touched;
    while (!stack.empty()) {
      NodeRef r = stack.back();
      stack.pop_back();
      const Node& n = arena_.node(r);
      if (n.kind == NodeKind::And || n.kind == NodeKind::Or) {
        touched.clear();
        for (NodeRef ch : n.operands) {
          const Node& cn = arena_.node(ch);
          if (cn.kind == NodeKind::Var)
            touched.push_back(cn.var);
          else if (cn.kind == NodeKind::Not &&
                   arena_.node(cn.operands[0]).kind == NodeKind::Var)
            touched.push_back(arena_.node(cn.operands[0]).var);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (Var v : touched) ++score[v];
      }
      for (NodeRef ch : n.operands)
        if (seen.insert(ch).second) stack.push_back(ch);
    }

    uint32_t best_score = 0;
    Var best = vars[0];
    for (Var v : vars) {
      auto it = score.find(v);
      uint32_t s = it == score.end() ? 0 : it->second;
      if (s > best_score) {
        best_score = s;
        best = v;
      }
    }
    if (cfg_.heuristic == BranchHeuristic::OccurrenceRandomTies) {
      std::vector<Var> tied;
      for (Var v : vars) {
        auto it = score.find(v);
        uint32_t s = it == score.end() ? 0 : it->second;
        if (s == best_score) tied.push_back(v);
      }
      best = tied[rng_() % tied.size()];
    }
    return best;
  }

  void check_deadline() {
    if (has_deadline_ && std::chrono::steady_clock::now() >= deadline_)
      throw TimeoutAbort{};
  }

  Arena& arena_;
  CounterConfig cfg_;
  CounterStats stats_;
  ComponentCache cache_;
  std::mt19937_64 rng_;
  std::chrono::steady_clock::time_point deadline_;
  bool has_deadline_ = false;
};

}  // namespace

CountResult count_models(Arena& arena, NodeRef f, const VarSet& scope,
                         const CounterConfig& cfg) {
  VarSet s = scope;
  normalize_var_set(s);
  Engine engine(arena, cfg);
  return engine.run(f, s);
}

CountResult count_with_assumptions(Arena& arena, NodeRef f, const VarSet& scope,
                                   std::span<const Literal> assumptions,
                                   const CounterConfig& cfg) {
  VarSet s = scope;
  normalize_var_set(s);
  std::unordered_map<Var, bool> fixed;
  for (const Literal& lit : assumptions) {
    if (!std::binary_search(s.begin(), s.end(), lit.var))
      throw Error("assumption variable outside the requested scope");
    auto [it, fresh] = fixed.emplace(lit.var, lit.value);
    if (!fresh && it->second != lit.value) {
      CountResult result;
      result.count = 0;
      result.scope_size = s.size();
      result.trivially_inconsistent = true;
      return result;
    }
  }
  std::vector<NodeRef> parts{f};
  for (const auto& [var, value] : std::map<Var, bool>(fixed.begin(), fixed.end()))
    parts.push_back(arena.literal_node(var, value));
  return count_models(arena, arena.mk_and(parts), s, cfg);
}

}  // namespace dagcount
