#pragma once

#include <gmpxx.h>

#include <vector>

#include "dagcount/formula.hpp"

namespace dagcount {

struct OracleLimit {
  size_t max_scope_size = 30;
};

/// Exact model count by evaluating `f` under all 2^|scope| total
/// assignments. Deliberately naive: this is the ground truth the search
/// counter is checked against. Refuses (throws) when |scope| exceeds the
/// limit rather than approximating.
mpz_class enumerate_count(const Arena& arena, NodeRef f, const VarSet& scope,
                          OracleLimit lim = {});

/// First `limit` models of `f` over `scope`, in lexicographic order:
/// variables ordered by ascending id, false before true.
std::vector<Assignment> enumerate_models(const Arena& arena, NodeRef f,
                                         const VarSet& scope, size_t limit,
                                         OracleLimit lim = {});

}  // namespace dagcount
