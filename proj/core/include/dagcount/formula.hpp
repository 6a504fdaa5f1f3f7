#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dagcount {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A variable is a dense index into the arena's variable pool.
using Var = uint32_t;

/// Reference to a node in the arena's hash-consed node store.
using NodeRef = uint32_t;

enum class NodeKind : uint8_t { True, False, Var, Not, And, Or };

/// Sorted, duplicate-free list of variable ids.
using VarSet = std::vector<Var>;

/// Sorts and deduplicates `vars` in place.
void normalize_var_set(VarSet& vars);

struct Node {
  NodeKind kind;
  Var var = 0;                     // meaningful only for NodeKind::Var
  std::vector<NodeRef> operands;   // Not: 1 entry; And/Or: >= 2, sorted by ref
};

/// Partial map from variables to truth values.
class Assignment {
public:
  Assignment() = default;

  void set(Var v, bool value) { bindings_[v] = value; }
  void unset(Var v) { bindings_.erase(v); }
  std::optional<bool> get(Var v) const {
    auto it = bindings_.find(v);
    if (it == bindings_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(Var v) const { return bindings_.count(v) != 0; }
  size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }

  /// Bindings as (var, value) pairs sorted by variable id.
  std::vector<std::pair<Var, bool>> sorted_items() const;

  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

private:
  std::unordered_map<Var, bool> bindings_;
};

/// One arena = one variable pool plus one hash-consed node store.
///
/// Construction (interning variables, building nodes, parsing) is
/// single-writer. Nodes are immutable once built and may be read from any
/// number of threads. Smart constructors keep every stored node simplified:
/// no constant or duplicate operands under And/Or, no nested And-in-And or
/// Or-in-Or, no double negation, operand lists sorted by node ref. Because
/// of hash consing, structurally identical formulas built in the same arena
/// are the same NodeRef.
class Arena {
public:
  Arena();
  Arena(const Arena&) = delete;
  Arena& operator=(const Arena&) = delete;

  // --- variable pool ---

  /// Interns `name`, returning the existing id if already present.
  /// The names "true" and "false" are reserved and rejected.
  Var intern_var(std::string_view name);
  std::optional<Var> find_var(std::string_view name) const;
  const std::string& var_name(Var v) const;
  size_t var_count() const { return var_names_.size(); }

  /// All pool variables, i.e. {0, .., var_count()-1}.
  VarSet all_vars() const;

  // --- node construction ---

  NodeRef true_node() const { return kTrueRef; }
  NodeRef false_node() const { return kFalseRef; }
  NodeRef var_node(Var v);
  NodeRef literal_node(Var v, bool positive);
  NodeRef mk_not(NodeRef a);
  NodeRef mk_and(std::span<const NodeRef> operands);
  NodeRef mk_or(std::span<const NodeRef> operands);
  NodeRef mk_and(std::initializer_list<NodeRef> ops) {
    return mk_and(std::span<const NodeRef>(ops.begin(), ops.size()));
  }
  NodeRef mk_or(std::initializer_list<NodeRef> ops) {
    return mk_or(std::span<const NodeRef>(ops.begin(), ops.size()));
  }
  /// a -> b, eliminated at construction as !a | b.
  NodeRef mk_implies(NodeRef a, NodeRef b);
  /// a <-> b, eliminated at construction as (!a | b) & (!b | a).
  NodeRef mk_iff(NodeRef a, NodeRef b);

  const Node& node(NodeRef r) const { return nodes_[r]; }
  size_t node_count() const { return nodes_.size(); }

  bool is_const(NodeRef r) const { return r == kTrueRef || r == kFalseRef; }

  // --- operations ---

  /// Variables reachable from `r`. Computed at construction, shared
  /// between nodes where possible.
  const VarSet& vars_of(NodeRef r) const { return *vars_[r]; }

  /// Standard propositional semantics. Throws Error naming the variable if
  /// an unbound variable is consulted.
  bool evaluate(NodeRef r, const Assignment& a) const;

  /// Substitutes every bound variable by its constant and re-simplifies.
  /// The result mentions no variable of dom(a).
  NodeRef condition(NodeRef r, const Assignment& a);

  /// Number of distinct nodes reachable from `r` (including `r`).
  size_t reachable_size(NodeRef r) const;

  /// Renders `r` in the input grammar (identifiers, !, &, |, parentheses).
  std::string to_string(NodeRef r) const;

private:
  NodeRef intern(Node&& n);
  std::shared_ptr<const VarSet> compute_vars(NodeRef r) const;
  bool evaluate_rec(NodeRef r, const Assignment& a,
                    std::unordered_map<NodeRef, bool>& memo) const;
  NodeRef condition_rec(NodeRef r, const Assignment& a,
                        std::unordered_map<NodeRef, NodeRef>& memo);
  void to_string_rec(NodeRef r, int parent_prec, std::string& out) const;

  static constexpr NodeRef kTrueRef = 0;
  static constexpr NodeRef kFalseRef = 1;

  struct NodeHash {
    const std::vector<Node>* nodes;
    size_t operator()(NodeRef r) const;
  };
  struct NodeEq {
    const std::vector<Node>* nodes;
    bool operator()(NodeRef a, NodeRef b) const;
  };

  std::vector<Node> nodes_;
  std::vector<std::shared_ptr<const VarSet>> vars_;
  std::unordered_set<NodeRef, NodeHash, NodeEq> interned_;

  std::vector<std::string> var_names_;
  std::unordered_map<std::string, Var> var_ids_;
};

}  // namespace dagcount
