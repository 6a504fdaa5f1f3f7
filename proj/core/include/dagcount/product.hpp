#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dagcount/counter.hpp"
#include "dagcount/formula.hpp"

namespace dagcount {

/// Errors in documentation or order files, tagged with the 1-based line.
class DocumentError : public Error {
 public:
  DocumentError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// condition -> code: orders satisfying the condition get the code added.
struct SupplementaryRule {
  NodeRef condition;
  Var code;
  int line;
};

/// head -> condition: choosing the head code requires the condition. A
/// missing head (global condition) gates every order. Lines sharing a code
/// head are conjoined into one entry at its first line.
struct ConstructibilityCondition {
  std::optional<Var> head;
  NodeRef condition;
  int line;
};

struct BomVariant {
  std::string variant_id;
  NodeRef selection;
  int line;
};

struct BomPosition {
  std::string position_id;
  std::vector<BomVariant> variants;
  bool has_null_variant = false;  // a variant with the conventional id "999"
};

/// A parsed rules file. The arena holds every rule formula; code variables
/// occupy ids 0..codes.size()-1 in declaration order. Counter runs grow
/// the shared arena, so operations must not run concurrently on one
/// document.
struct ProductDocumentation {
  std::shared_ptr<Arena> arena;
  std::vector<Var> codes;
  std::vector<SupplementaryRule> rules;
  std::vector<ConstructibilityCondition> conditions;
  std::vector<BomPosition> bom;

  std::optional<Var> find_code(std::string_view name) const;
  const std::string& code_name(Var v) const { return arena->var_name(v); }
  const BomPosition* find_position(std::string_view position_id) const;
};

/// Parses the rules format: "codes:", "sr:", "cc:" and "part:" lines, "#"
/// comments. Rejects undeclared codes, duplicate variant ids and malformed
/// lines with their line number.
ProductDocumentation parse_documentation(std::string_view text);

/// The product overview formula: every supplementary rule as condition ->
/// code, every constructibility condition as head -> condition. Its models
/// over the code set are exactly the valid configurations.
NodeRef build_pof(const ProductDocumentation& doc);

CountResult total_configurations(const ProductDocumentation& doc,
                                 const CounterConfig& cfg = {});

struct Frequency {
  mpz_class numerator;
  mpz_class denominator;
  mpq_class as_rational() const;
  /// Decimal approximation, 4 significant digits ("0.375").
  std::string as_decimal() const;
};

/// Share of valid configurations containing the code. Throws when the
/// documentation admits no configuration or a count fails to complete.
Frequency option_frequency(const ProductDocumentation& doc, Var code,
                           const CounterConfig& cfg = {});

/// Valid configurations under forced option choices.
CountResult count_with_options(const ProductDocumentation& doc,
                               std::span<const Literal> forced,
                               const CounterConfig& cfg = {});

/// Valid configurations that install the given position variant.
CountResult part_inclusion_count(const ProductDocumentation& doc,
                                 std::string_view position_id,
                                 std::string_view variant_id,
                                 const CounterConfig& cfg = {});

/// Valid configurations selecting both parts at once; nonzero for distinct
/// variants of one position signals a documentation error.
CountResult overlap_count(const ProductDocumentation& doc, NodeRef selection_a,
                          NodeRef selection_b, const CounterConfig& cfg = {});

struct VariantCount {
  std::string variant_id;
  CountResult result;
};

struct OverlapEntry {
  std::string variant_a;
  std::string variant_b;
  CountResult result;
  bool flagged = false;  // overlap count completed and is nonzero
};

struct PositionReport {
  std::string position_id;
  std::vector<VariantCount> variants;
  std::vector<OverlapEntry> overlaps;  // unordered pairs, file order
  bool any_flagged = false;
};

PositionReport position_report(const ProductDocumentation& doc,
                               std::string_view position_id,
                               const CounterConfig& cfg = {});

struct RedundancyResult {
  CountResult before;
  CountResult after;
  /// Both counts completed and are equal: the candidate is entailed and
  /// adding it changes nothing.
  bool redundant = false;
};

RedundancyResult redundancy_check(const ProductDocumentation& doc, NodeRef candidate,
                                  const CounterConfig& cfg = {});

struct CodeFrequencyDelta {
  std::string code;
  std::optional<mpq_class> frequency_a;
  std::optional<mpq_class> frequency_b;
  std::optional<mpq_class> delta;  // b - a when both sides are defined
};

struct QualityReport {
  CountResult count_a;  // both counts taken over the union code set
  CountResult count_b;
  size_t union_size = 0;
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;
  std::optional<mpq_class> ratio;  // a / b, absent when b is zero or unknown
  std::vector<CodeFrequencyDelta> deltas;
  bool complete = false;
};

/// Compares two documentation versions over the union of their code sets;
/// codes only one side declares contribute free factors of two there.
/// Frequency deltas are reported for the requested code names. Timeouts
/// leave the affected fields absent and the report marked incomplete.
QualityReport compare_versions(const ProductDocumentation& doc_a,
                               const ProductDocumentation& doc_b,
                               std::span<const std::string> delta_codes,
                               const CounterConfig& cfg = {});

struct Order {
  std::vector<Var> chosen;  // sorted, unique
};

/// Whitespace-separated code names; "#" comments allowed.
Order parse_order(std::string_view text, const ProductDocumentation& doc);

struct Verdict {
  bool constructible = false;
  /// The order after supplementation, ascending by code id.
  VarSet supplemented;
  /// Heads of failed constructibility conditions in file order; global
  /// conditions report as "true". Empty exactly when constructible.
  std::vector<std::string> violated;
};

/// Three stages: seed the chosen codes, supplement to a fixpoint (full
/// passes in file order, unassigned codes reading as false), then check
/// every applicable constructibility condition under the same closed-world
/// reading.
Verdict process_order(const ProductDocumentation& doc, const Order& order);

}  // namespace dagcount
