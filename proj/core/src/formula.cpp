#include "dagcount/formula.hpp"

#include <algorithm>
#include <cassert>

namespace dagcount {

void normalize_var_set(VarSet& vars) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
}

std::vector<std::pair<Var, bool>> Assignment::sorted_items() const {
  std::vector<std::pair<Var, bool>> items(bindings_.begin(), bindings_.end());
  std::sort(items.begin(), items.end());
  return items;
}

size_t Arena::NodeHash::operator()(NodeRef r) const {
  const Node& n = (*nodes)[r];
  size_t h = static_cast<size_t>(n.kind) * 0x9e3779b97f4a7c15ull;
  h ^= n.var + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  for (NodeRef c : n.operands)
    h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

bool Arena::NodeEq::operator()(NodeRef a, NodeRef b) const {
  const Node& x = (*nodes)[a];
  const Node& y = (*nodes)[b];
  return x.kind == y.kind && x.var == y.var && x.operands == y.operands;
}

Arena::Arena() : interned_(16, NodeHash{&nodes_}, NodeEq{&nodes_}) {
  nodes_.push_back(Node{NodeKind::True, 0, {}});
  nodes_.push_back(Node{NodeKind::False, 0, {}});
  auto empty = std::make_shared<const VarSet>();
  vars_.push_back(empty);
  vars_.push_back(empty);
  interned_.insert(kTrueRef);
  interned_.insert(kFalseRef);
}

Var Arena::intern_var(std::string_view name) {
  if (name == "true" || name == "false")
    throw Error("'" + std::string(name) + "' is reserved and cannot name a variable");
  auto it = var_ids_.find(std::string(name));
  if (it != var_ids_.end()) return it->second;
  Var v = static_cast<Var>(var_names_.size());
  var_names_.emplace_back(name);
  var_ids_.emplace(var_names_.back(), v);
  return v;
}

std::optional<Var> Arena::find_var(std::string_view name) const {
  auto it = var_ids_.find(std::string(name));
  if (it == var_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Arena::var_name(Var v) const {
  assert(v < var_names_.size());
  return var_names_[v];
}

VarSet Arena::all_vars() const {
  VarSet vs(var_count());
  for (size_t i = 0; i < vs.size(); ++i) vs[i] = static_cast<Var>(i);
  return vs;
}

std::shared_ptr<const VarSet> Arena::compute_vars(NodeRef r) const {
  const Node& n = nodes_[r];
  switch (n.kind) {
    case NodeKind::True:
    case NodeKind::False:
      return vars_[kTrueRef];
    case NodeKind::Var:
      return std::make_shared<const VarSet>(VarSet{n.var});
    case NodeKind::Not:
      return vars_[n.operands[0]];  // negation shares its child's set
    case NodeKind::And:
    case NodeKind::Or: {
      VarSet merged = *vars_[n.operands[0]];
      for (size_t i = 1; i < n.operands.size(); ++i) {
        const VarSet& next = *vars_[n.operands[i]];
        VarSet out;
        out.reserve(merged.size() + next.size());
        std::set_union(merged.begin(), merged.end(), next.begin(), next.end(),
                       std::back_inserter(out));
        merged = std::move(out);
      }
      return std::make_shared<const VarSet>(std::move(merged));
    }
  }
  return vars_[kTrueRef];
}

NodeRef Arena::intern(Node&& n) {
  nodes_.push_back(std::move(n));
  NodeRef candidate = static_cast<NodeRef>(nodes_.size() - 1);
  auto it = interned_.find(candidate);
  if (it != interned_.end()) {
    nodes_.pop_back();
    return *it;
  }
  interned_.insert(candidate);
  vars_.push_back(compute_vars(candidate));
  return candidate;
}

NodeRef Arena::var_node(Var v) {
  assert(v < var_names_.size());
  return intern(Node{NodeKind::Var, v, {}});
}

NodeRef Arena::literal_node(Var v, bool positive) {
  NodeRef n = var_node(v);
  return positive ? n : mk_not(n);
}

NodeRef Arena::mk_not(NodeRef a) {
  switch (nodes_[a].kind) {
    case NodeKind::True: return kFalseRef;
    case NodeKind::False: return kTrueRef;
    case NodeKind::Not: return nodes_[a].operands[0];
    default: return intern(Node{NodeKind::Not, 0, {a}});
  }
}

NodeRef Arena::mk_and(std::span<const NodeRef> operands) {
  std::vector<NodeRef> flat;
  flat.reserve(operands.size());
  for (NodeRef op : operands) {
    const Node& n = nodes_[op];
    if (n.kind == NodeKind::And) {
      flat.insert(flat.end(), n.operands.begin(), n.operands.end());
    } else if (op == kTrueRef) {
      continue;
    } else if (op == kFalseRef) {
      return kFalseRef;
    } else {
      flat.push_back(op);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return kTrueRef;
  if (flat.size() == 1) return flat[0];
  return intern(Node{NodeKind::And, 0, std::move(flat)});
}

NodeRef Arena::mk_or(std::span<const NodeRef> operands) {
  std::vector<NodeRef> flat;
  flat.reserve(operands.size());
  for (NodeRef op : operands) {
    const Node& n = nodes_[op];
    if (n.kind == NodeKind::Or) {
      flat.insert(flat.end(), n.operands.begin(), n.operands.end());
    } else if (op == kFalseRef) {
      continue;
    } else if (op == kTrueRef) {
      return kTrueRef;
    } else {
      flat.push_back(op);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return kFalseRef;
  if (flat.size() == 1) return flat[0];
  return intern(Node{NodeKind::Or, 0, std::move(flat)});
}

NodeRef Arena::mk_implies(NodeRef a, NodeRef b) {
  return mk_or({mk_not(a), b});
}

NodeRef Arena::mk_iff(NodeRef a, NodeRef b) {
  return mk_and({mk_or({mk_not(a), b}), mk_or({mk_not(b), a})});
}

bool Arena::evaluate(NodeRef r, const Assignment& a) const {
  std::unordered_map<NodeRef, bool> memo;
  return evaluate_rec(r, a, memo);
}

bool Arena::evaluate_rec(NodeRef r, const Assignment& a,
                         std::unordered_map<NodeRef, bool>& memo) const {
  const Node& n = nodes_[r];
  switch (n.kind) {
    case NodeKind::True: return true;
    case NodeKind::False: return false;
    case NodeKind::Var: {
      auto v = a.get(n.var);
      if (!v) throw Error("unbound variable '" + var_name(n.var) + "' in evaluation");
      return *v;
    }
    default: break;
  }
  auto it = memo.find(r);
  if (it != memo.end()) return it->second;
  bool result;
  switch (n.kind) {
    case NodeKind::Not:
      result = !evaluate_rec(n.operands[0], a, memo);
      break;
    case NodeKind::And:
      result = true;
      for (NodeRef c : n.operands)
        if (!evaluate_rec(c, a, memo)) { result = false; break; }
      break;
    case NodeKind::Or:
      result = false;
      for (NodeRef c : n.operands)
        if (evaluate_rec(c, a, memo)) { result = true; break; }
      break;
    default:
      result = false;
      break;
  }
  memo.emplace(r, result);
  return result;
}

NodeRef Arena::condition(NodeRef r, const Assignment& a) {
  if (a.empty()) return r;
  std::unordered_map<NodeRef, NodeRef> memo;
  return condition_rec(r, a, memo);
}

NodeRef Arena::condition_rec(NodeRef r, const Assignment& a,
                             std::unordered_map<NodeRef, NodeRef>& memo) {
  const Node& n = nodes_[r];
  switch (n.kind) {
    case NodeKind::True:
    case NodeKind::False:
      return r;
    case NodeKind::Var: {
      auto v = a.get(n.var);
      if (!v) return r;
      return *v ? kTrueRef : kFalseRef;
    }
    default: break;
  }
  auto it = memo.find(r);
  if (it != memo.end()) return it->second;
  NodeRef result;
  if (n.kind == NodeKind::Not) {
    result = mk_not(condition_rec(n.operands[0], a, memo));
  } else {
    // Copy kind and operands first: recursion grows nodes_ and may
    // invalidate n.
    const NodeKind kind = n.kind;
    std::vector<NodeRef> ops(n.operands);
    for (NodeRef& op : ops) op = condition_rec(op, a, memo);
    result = kind == NodeKind::And ? mk_and(ops) : mk_or(ops);
  }
  memo.emplace(r, result);
  return result;
}

size_t Arena::reachable_size(NodeRef r) const {
  std::unordered_set<NodeRef> seen;
  std::vector<NodeRef> stack{r};
  while (!stack.empty()) {
    NodeRef cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    for (NodeRef c : nodes_[cur].operands) stack.push_back(c);
  }
  return seen.size();
}

namespace {
// Grammar precedence levels used for minimal parenthesization.
int precedence_of(NodeKind k) {
  switch (k) {
    case NodeKind::Or: return 1;
    case NodeKind::And: return 2;
    case NodeKind::Not: return 3;
    default: return 4;  // atoms
  }
}
}  // namespace

void Arena::to_string_rec(NodeRef r, int parent_prec, std::string& out) const {
  const Node& n = nodes_[r];
  int prec = precedence_of(n.kind);
  bool need_parens = prec < parent_prec;
  if (need_parens) out += '(';
  switch (n.kind) {
    case NodeKind::True: out += "true"; break;
    case NodeKind::False: out += "false"; break;
    case NodeKind::Var: out += var_name(n.var); break;
    case NodeKind::Not:
      out += '!';
      to_string_rec(n.operands[0], precedence_of(NodeKind::Not), out);
      break;
    case NodeKind::And:
    case NodeKind::Or: {
      const char* sep = n.kind == NodeKind::And ? " & " : " | ";
      for (size_t i = 0; i < n.operands.size(); ++i) {
        if (i) out += sep;
        // Children at equal precedence need no parens for associative ops,
        // but a stricter child level keeps output unambiguous.
        to_string_rec(n.operands[i], prec, out);
      }
      break;
    }
  }
  if (need_parens) out += ')';
}

std::string Arena::to_string(NodeRef r) const {
  std::string out;
  to_string_rec(r, 0, out);
  return out;
}

}  // namespace dagcount
