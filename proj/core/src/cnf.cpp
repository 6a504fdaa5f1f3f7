#include "dagcount/cnf.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <unordered_map>

namespace dagcount {

namespace {

struct Translator {
  const Arena& arena;
  bool both_directions;

  Translator(const Arena& a, bool both) : arena(a), both_directions(both) {}

  CnfDocument doc;
  std::unordered_map<Var, int> source_index;     // pool id -> document variable
  std::unordered_map<NodeRef, int> aux_index;    // gate node -> document variable
  std::unordered_map<NodeRef, uint8_t> polarity; // bit 0: positive, bit 1: negative

  // Document literal for a node that is a variable, a negation chain over
  // one, or an already-numbered gate.
  int literal_of(NodeRef r) const {
    const Node& n = arena.node(r);
    switch (n.kind) {
      case NodeKind::Var:
        return source_index.at(n.var);
      case NodeKind::Not:
        return -literal_of(n.operands[0]);
      default:
        return aux_index.at(r);
    }
  }

  // Root-first numbering of gate auxiliaries; children in stored order.
  void number_gates(NodeRef root) {
    std::vector<NodeRef> stack{root};
    while (!stack.empty()) {
      NodeRef r = stack.back();
      stack.pop_back();
      const Node& n = arena.node(r);
      if (n.kind == NodeKind::And || n.kind == NodeKind::Or) {
        if (aux_index.count(r)) continue;
        int id = doc.declared_var_count + static_cast<int>(aux_index.size()) + 1;
        aux_index.emplace(r, id);
        doc.aux_map.emplace_back(id, r);
      }
      for (auto it = n.operands.rbegin(); it != n.operands.rend(); ++it)
        stack.push_back(*it);
    }
  }

  // Which sides of each gate definition the formula actually constrains.
  // Negation flips the polarity; gates pass it through to their children.
  void mark_polarity(NodeRef root) {
    std::vector<std::pair<NodeRef, uint8_t>> stack{{root, 1}};
    while (!stack.empty()) {
      auto [r, pol] = stack.back();
      stack.pop_back();
      uint8_t& seen = polarity[r];
      if ((seen & pol) == pol) continue;
      seen |= pol;
      const Node& n = arena.node(r);
      uint8_t child_pol = n.kind == NodeKind::Not ? uint8_t(pol == 1 ? 2 : 1) : pol;
      for (NodeRef c : n.operands) stack.push_back({c, child_pol});
    }
  }

  void emit_gate(NodeRef r) {
    const Node& n = arena.node(r);
    int x = aux_index.at(r);
    uint8_t pol = both_directions ? 3 : polarity.at(r);
    std::vector<int> lits;
    lits.reserve(n.operands.size());
    for (NodeRef c : n.operands) lits.push_back(literal_of(c));

    if (n.kind == NodeKind::And) {
      if (pol & 1)  // x -> l_i for every operand
        for (int l : lits) doc.clauses.push_back({-x, l});
      if (pol & 2) {  // l_1 & ... & l_k -> x
        std::vector<int> clause{x};
        for (int l : lits) clause.push_back(-l);
        doc.clauses.push_back(std::move(clause));
      }
    } else {
      if (pol & 1) {  // x -> l_1 | ... | l_k
        std::vector<int> clause{-x};
        for (int l : lits) clause.push_back(l);
        doc.clauses.push_back(std::move(clause));
      }
      if (pol & 2)  // l_i -> x for every operand
        for (int l : lits) doc.clauses.push_back({x, -l});
    }
  }

  CnfDocument translate(NodeRef f, const VarSet& scope) {
    doc.source_vars = scope;
    normalize_var_set(doc.source_vars);
    const VarSet& used = arena.vars_of(f);
    if (!std::includes(doc.source_vars.begin(), doc.source_vars.end(), used.begin(),
                       used.end()))
      throw Error("formula mentions variables outside the requested scope");
    doc.declared_var_count = static_cast<int>(doc.source_vars.size());
    for (int i = 0; i < doc.declared_var_count; ++i)
      source_index.emplace(doc.source_vars[i], i + 1);

    if (f == arena.true_node()) return std::move(doc);
    if (f == arena.false_node()) {
      doc.clauses.push_back({});
      return std::move(doc);
    }

    number_gates(f);
    doc.declared_var_count += static_cast<int>(aux_index.size());
    if (!both_directions) mark_polarity(f);

    doc.root_literal = literal_of(f);
    doc.clauses.push_back({doc.root_literal});
    // Definition clauses follow the aux numbering, root gate first.
    for (auto [id, node] : doc.aux_map) {
      (void)id;
      emit_gate(node);
    }
    return std::move(doc);
  }
};

}  // namespace

CnfDocument tseitin_implication(const Arena& arena, NodeRef f, const VarSet& scope) {
  Translator t{arena, /*both_directions=*/false};
  return t.translate(f, scope);
}

CnfDocument tseitin_equivalence(const Arena& arena, NodeRef f, const VarSet& scope) {
  Translator t{arena, /*both_directions=*/true};
  return t.translate(f, scope);
}

std::string write_dimacs(const CnfDocument& doc, bool aux_comments) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "p cnf %d %zu\n", doc.declared_var_count,
                doc.clauses.size());
  out += buf;
  if (aux_comments)
    for (auto [id, node] : doc.aux_map) {
      std::snprintf(buf, sizeof buf, "c aux %d %u\n", id, node);
      out += buf;
    }
  for (const auto& clause : doc.clauses) {
    for (int lit : clause) {
      std::snprintf(buf, sizeof buf, "%d ", lit);
      out += buf;
    }
    out += "0\n";
  }
  return out;
}

}  // namespace dagcount
