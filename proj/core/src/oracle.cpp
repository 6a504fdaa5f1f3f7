#include "dagcount/oracle.hpp"

#include <algorithm>
#include <unordered_map>

namespace dagcount {

namespace {

// Reachable nodes in topological order (operands first), flattened for a
// cheap per-assignment sweep.
struct FlatFormula {
  struct Entry {
    NodeKind kind;
    int var_slot = -1;              // index into the scope, for Var nodes
    std::vector<uint32_t> operands; // indices into `entries`
  };
  std::vector<Entry> entries;  // last entry is the root

  FlatFormula(const Arena& arena, NodeRef root, const VarSet& scope) {
    std::unordered_map<NodeRef, uint32_t> index;
    std::vector<std::pair<NodeRef, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [ref, expanded] = stack.back();
      stack.pop_back();
      if (index.count(ref)) continue;
      const Node& n = arena.node(ref);
      if (!expanded) {
        stack.push_back({ref, true});
        for (NodeRef c : n.operands) stack.push_back({c, false});
        continue;
      }
      Entry e;
      e.kind = n.kind;
      if (n.kind == NodeKind::Var) {
        auto it = std::lower_bound(scope.begin(), scope.end(), n.var);
        if (it == scope.end() || *it != n.var)
          throw Error("variable '" + arena.var_name(n.var) + "' outside the given scope");
        e.var_slot = static_cast<int>(it - scope.begin());
      }
      e.operands.reserve(n.operands.size());
      for (NodeRef c : n.operands) e.operands.push_back(index.at(c));
      index.emplace(ref, static_cast<uint32_t>(entries.size()));
      entries.push_back(std::move(e));
    }
  }

  bool eval(const std::vector<uint8_t>& var_values, std::vector<uint8_t>& scratch) const {
    for (size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      uint8_t v = 0;
      switch (e.kind) {
        case NodeKind::True: v = 1; break;
        case NodeKind::False: v = 0; break;
        case NodeKind::Var: v = var_values[static_cast<size_t>(e.var_slot)]; break;
        case NodeKind::Not: v = scratch[e.operands[0]] ^ 1u; break;
        case NodeKind::And:
          v = 1;
          for (uint32_t c : e.operands) v &= scratch[c];
          break;
        case NodeKind::Or:
          v = 0;
          for (uint32_t c : e.operands) v |= scratch[c];
          break;
      }
      scratch[i] = v;
    }
    return scratch.back() != 0;
  }
};

void check_scope(const VarSet& scope, OracleLimit lim) {
  if (scope.size() > lim.max_scope_size || scope.size() >= 64)
    throw Error("oracle refuses scope of size " + std::to_string(scope.size()) +
                " (limit " + std::to_string(std::min<size_t>(lim.max_scope_size, 63)) + ")");
}

}  // namespace

mpz_class enumerate_count(const Arena& arena, NodeRef f, const VarSet& scope,
                          OracleLimit lim) {
  check_scope(scope, lim);
  if (f == arena.true_node()) return mpz_class(1) << scope.size();
  if (f == arena.false_node()) return 0;

  FlatFormula flat(arena, f, scope);
  const size_t k = scope.size();
  std::vector<uint8_t> var_values(k, 0);
  std::vector<uint8_t> scratch(flat.entries.size(), 0);
  uint64_t total = 0;
  const uint64_t limit = uint64_t(1) << k;
  for (uint64_t mask = 0; mask < limit; ++mask) {
    for (size_t j = 0; j < k; ++j)
      var_values[j] = (mask >> (k - 1 - j)) & 1u;
    if (flat.eval(var_values, scratch)) ++total;
  }
  return mpz_class(static_cast<unsigned long>(total));
}

std::vector<Assignment> enumerate_models(const Arena& arena, NodeRef f,
                                         const VarSet& scope, size_t limit,
                                         OracleLimit lim) {
  check_scope(scope, lim);
  std::vector<Assignment> models;
  if (limit == 0) return models;

  const size_t k = scope.size();
  const uint64_t end = uint64_t(1) << k;
  std::vector<uint8_t> var_values(k, 0);

  bool const_true = f == arena.true_node();
  bool const_false = f == arena.false_node();
  std::optional<FlatFormula> flat;
  std::vector<uint8_t> scratch;
  if (!const_true && !const_false) {
    flat.emplace(arena, f, scope);
    scratch.assign(flat->entries.size(), 0);
  }

  for (uint64_t mask = 0; mask < end && models.size() < limit; ++mask) {
    for (size_t j = 0; j < k; ++j)
      var_values[j] = (mask >> (k - 1 - j)) & 1u;
    bool sat = const_true || (!const_false && flat->eval(var_values, scratch));
    if (!sat) continue;
    Assignment a;
    for (size_t j = 0; j < k; ++j) a.set(scope[j], var_values[j] != 0);
    models.push_back(std::move(a));
  }
  return models;
}

}  // namespace dagcount
