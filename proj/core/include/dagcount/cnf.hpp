#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dagcount/formula.hpp"

namespace dagcount {

/// CNF with DIMACS literal conventions: literal +k / -k refers to the
/// document variable with index k-1. Source variables come first (the
/// scope, ascending by pool id), auxiliary gate variables after them.
struct CnfDocument {
  int declared_var_count = 0;
  std::vector<std::vector<int>> clauses;
  /// Scope variables in ascending pool id order; document variable i
  /// (1-based) is source_vars[i-1] for i <= source_vars.size().
  std::vector<Var> source_vars;
  /// (document variable, defining gate node), one entry per And/Or node.
  std::vector<std::pair<int, NodeRef>> aux_map;
  /// The literal asserting the whole formula; 0 when the root simplified
  /// to a constant (true: no clauses; false: one empty clause).
  int root_literal = 0;
};

/// Tseitin transform, implication flavor: one auxiliary per And/Or node of
/// the DAG, definition clauses only in the direction each gate polarity
/// requires. Negation carries no auxiliary; it folds into literals. The
/// output is equisatisfiable with `f` but does not preserve model counts.
CnfDocument tseitin_implication(const Arena& arena, NodeRef f, const VarSet& scope);

/// Tseitin transform, equivalence flavor: definition clauses in both
/// directions. Every auxiliary is functionally determined by the source
/// variables, so the model count over all document variables equals the
/// count of `f` over `scope`.
CnfDocument tseitin_equivalence(const Arena& arena, NodeRef f, const VarSet& scope);

/// DIMACS text for `doc`. With `aux_comments`, emits one "c aux <var>
/// <node>" line per auxiliary documenting the aux_map.
std::string write_dimacs(const CnfDocument& doc, bool aux_comments = false);

}  // namespace dagcount
