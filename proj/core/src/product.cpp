#include "dagcount/product.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "dagcount/parse.hpp"
#include "dagcount/report.hpp"

namespace dagcount {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  unsigned char first = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(first) && s[0] != '_') return false;
  for (char c : s.substr(1)) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '.') return false;
  }
  return true;
}

// Offsets of "->" at parenthesis depth zero; the arrow inside "<->" does
// not count.
std::vector<size_t> toplevel_arrows(std::string_view s) {
  std::vector<size_t> out;
  int depth = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (depth == 0 && s[i] == '-' && s[i + 1] == '>' && (i == 0 || s[i - 1] != '<'))
      out.push_back(i);
  }
  return out;
}

NodeRef parse_rule_formula(std::string_view text, Arena& arena, size_t code_count,
                           int line_no) {
  NodeRef f;
  try {
    f = parse_formula(text, arena);
  } catch (const ParseError& e) {
    throw DocumentError(line_no, e.what());
  }
  if (arena.var_count() > code_count)
    throw DocumentError(line_no, "undeclared code '" +
                                     arena.var_name(static_cast<Var>(code_count)) + "'");
  return f;
}

VarSet code_scope(const ProductDocumentation& doc) {
  VarSet scope = doc.codes;
  normalize_var_set(scope);
  return scope;
}

NodeRef pof_with(const ProductDocumentation& doc, std::initializer_list<NodeRef> extra) {
  std::vector<NodeRef> parts{build_pof(doc)};
  parts.insert(parts.end(), extra.begin(), extra.end());
  return doc.arena->mk_and(parts);
}

}  // namespace

std::optional<Var> ProductDocumentation::find_code(std::string_view name) const {
  return arena->find_var(name);
}

const BomPosition* ProductDocumentation::find_position(std::string_view position_id) const {
  for (const BomPosition& p : bom)
    if (p.position_id == position_id) return &p;
  return nullptr;
}

ProductDocumentation parse_documentation(std::string_view text) {
  ProductDocumentation doc;
  doc.arena = std::make_shared<Arena>();
  Arena& arena = *doc.arena;

  struct Line {
    int number;
    std::string_view directive;
    std::string_view rest;
  };
  std::vector<Line> rule_lines;

  // First pass: split lines, strip comments, collect code declarations so
  // rules may reference codes declared anywhere in the file.
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw DocumentError(line_no, "expected a 'codes:', 'sr:', 'cc:' or 'part:' line");
    std::string_view directive = trim(line.substr(0, colon));
    std::string_view rest = line.substr(colon + 1);
    if (directive == "codes") {
      std::string_view tail = trim(rest);
      if (tail.empty()) throw DocumentError(line_no, "empty codes declaration");
      while (!tail.empty()) {
        size_t cut = 0;
        while (cut < tail.size() && !std::isspace(static_cast<unsigned char>(tail[cut])))
          ++cut;
        std::string_view token = tail.substr(0, cut);
        tail = trim(tail.substr(cut));
        if (token == "true" || token == "false")
          throw DocumentError(line_no, "'" + std::string(token) + "' cannot name a code");
        if (!is_identifier(token))
          throw DocumentError(line_no, "invalid code name '" + std::string(token) + "'");
        size_t before = arena.var_count();
        Var v = arena.intern_var(token);
        if (arena.var_count() > before) doc.codes.push_back(v);
      }
    } else if (directive == "sr" || directive == "cc" || directive == "part") {
      rule_lines.push_back({line_no, directive, rest});
    } else {
      throw DocumentError(line_no, "unknown directive '" + std::string(directive) + "'");
    }
  }

  const size_t code_count = doc.codes.size();
  std::vector<std::optional<size_t>> condition_of_head(code_count);

  for (const Line& l : rule_lines) {
    if (l.directive == "sr") {
      std::vector<size_t> arrows = toplevel_arrows(l.rest);
      if (arrows.empty())
        throw DocumentError(l.number, "supplementary rule needs '<condition> -> <code>'");
      size_t split = arrows.back();
      std::string_view head = trim(l.rest.substr(split + 2));
      if (!is_identifier(head))
        throw DocumentError(l.number,
                            "rule head must be a single code, got '" + std::string(head) + "'");
      std::optional<Var> code = arena.find_var(head);
      if (!code)
        throw DocumentError(l.number, "undeclared code '" + std::string(head) + "'");
      NodeRef condition =
          parse_rule_formula(l.rest.substr(0, split), arena, code_count, l.number);
      doc.rules.push_back({condition, *code, l.number});
    } else if (l.directive == "cc") {
      std::vector<size_t> arrows = toplevel_arrows(l.rest);
      if (arrows.empty())
        throw DocumentError(l.number,
                            "constructibility condition needs '<code> -> <condition>'");
      size_t split = arrows.front();
      std::string_view head = trim(l.rest.substr(0, split));
      NodeRef condition =
          parse_rule_formula(l.rest.substr(split + 2), arena, code_count, l.number);
      if (head == "true") {
        doc.conditions.push_back({std::nullopt, condition, l.number});
      } else {
        std::optional<Var> code = arena.find_var(head);
        if (!code)
          throw DocumentError(l.number, "undeclared code '" + std::string(head) + "'");
        // One entry per code head: later lines conjoin onto the first.
        std::optional<size_t>& slot = condition_of_head[*code];
        if (slot) {
          ConstructibilityCondition& cc = doc.conditions[*slot];
          cc.condition = arena.mk_and({cc.condition, condition});
        } else {
          slot = doc.conditions.size();
          doc.conditions.push_back({*code, condition, l.number});
        }
      }
    } else {  // part
      size_t colon = l.rest.find(':');
      if (colon == std::string_view::npos)
        throw DocumentError(l.number, "part line needs '<position>.<variant> : <formula>'");
      std::string_view part_id = trim(l.rest.substr(0, colon));
      size_t dot = part_id.rfind('.');
      if (dot == std::string_view::npos || dot == 0 || dot + 1 == part_id.size())
        throw DocumentError(l.number, "part id must look like '<position>.<variant>'");
      std::string position(part_id.substr(0, dot));
      std::string variant(part_id.substr(dot + 1));
      NodeRef selection =
          parse_rule_formula(l.rest.substr(colon + 1), arena, code_count, l.number);

      BomPosition* slot = nullptr;
      for (BomPosition& p : doc.bom)
        if (p.position_id == position) slot = &p;
      if (!slot) {
        doc.bom.push_back({position, {}, false});
        slot = &doc.bom.back();
      }
      for (const BomVariant& v : slot->variants)
        if (v.variant_id == variant)
          throw DocumentError(l.number, "duplicate variant '" + position + "." + variant + "'");
      slot->variants.push_back({variant, selection, l.number});
      if (variant == "999") slot->has_null_variant = true;
    }
  }
  return doc;
}

NodeRef build_pof(const ProductDocumentation& doc) {
  Arena& arena = *doc.arena;
  std::vector<NodeRef> parts;
  parts.reserve(doc.rules.size() + doc.conditions.size());
  for (const SupplementaryRule& rule : doc.rules)
    parts.push_back(arena.mk_implies(rule.condition, arena.var_node(rule.code)));
  for (const ConstructibilityCondition& cc : doc.conditions)
    parts.push_back(cc.head ? arena.mk_implies(arena.var_node(*cc.head), cc.condition)
                            : cc.condition);
  return arena.mk_and(parts);
}

CountResult total_configurations(const ProductDocumentation& doc, const CounterConfig& cfg) {
  return count_models(*doc.arena, build_pof(doc), code_scope(doc), cfg);
}

mpq_class Frequency::as_rational() const {
  mpq_class q(numerator, denominator);
  q.canonicalize();
  return q;
}

std::string Frequency::as_decimal() const { return render_decimal(as_rational()); }

Frequency option_frequency(const ProductDocumentation& doc, Var code,
                           const CounterConfig& cfg) {
  if (code >= doc.codes.size()) throw Error("unknown code");
  CountResult total = total_configurations(doc, cfg);
  if (total.status != CountStatus::Complete)
    throw Error("model count did not complete");
  if (*total.count == 0) throw Error("documentation void: no valid configuration");
  Literal lit{code, true};
  CountResult with = count_with_options(doc, std::span(&lit, 1), cfg);
  if (with.status != CountStatus::Complete)
    throw Error("model count did not complete");
  return Frequency{*with.count, *total.count};
}

CountResult count_with_options(const ProductDocumentation& doc,
                               std::span<const Literal> forced, const CounterConfig& cfg) {
  return count_with_assumptions(*doc.arena, build_pof(doc), code_scope(doc), forced, cfg);
}

CountResult part_inclusion_count(const ProductDocumentation& doc,
                                 std::string_view position_id, std::string_view variant_id,
                                 const CounterConfig& cfg) {
  const BomPosition* position = doc.find_position(position_id);
  if (!position) throw Error("unknown position '" + std::string(position_id) + "'");
  for (const BomVariant& v : position->variants)
    if (v.variant_id == variant_id)
      return count_models(*doc.arena, pof_with(doc, {v.selection}), code_scope(doc), cfg);
  throw Error("unknown variant '" + std::string(position_id) + "." +
              std::string(variant_id) + "'");
}

CountResult overlap_count(const ProductDocumentation& doc, NodeRef selection_a,
                          NodeRef selection_b, const CounterConfig& cfg) {
  return count_models(*doc.arena, pof_with(doc, {selection_a, selection_b}),
                      code_scope(doc), cfg);
}

PositionReport position_report(const ProductDocumentation& doc,
                               std::string_view position_id, const CounterConfig& cfg) {
  const BomPosition* position = doc.find_position(position_id);
  if (!position) throw Error("unknown position '" + std::string(position_id) + "'");
  PositionReport report;
  report.position_id = position->position_id;
  for (const BomVariant& v : position->variants)
    report.variants.push_back(
        {v.variant_id,
         count_models(*doc.arena, pof_with(doc, {v.selection}), code_scope(doc), cfg)});
  for (size_t i = 0; i < position->variants.size(); ++i)
    for (size_t j = i + 1; j < position->variants.size(); ++j) {
      const BomVariant& a = position->variants[i];
      const BomVariant& b = position->variants[j];
      CountResult r = overlap_count(doc, a.selection, b.selection, cfg);
      bool flagged = r.status == CountStatus::Complete && *r.count != 0;
      report.any_flagged |= flagged;
      report.overlaps.push_back({a.variant_id, b.variant_id, std::move(r), flagged});
    }
  return report;
}

RedundancyResult redundancy_check(const ProductDocumentation& doc, NodeRef candidate,
                                  const CounterConfig& cfg) {
  RedundancyResult result;
  result.before = total_configurations(doc, cfg);
  result.after =
      count_models(*doc.arena, pof_with(doc, {candidate}), code_scope(doc), cfg);
  result.redundant = result.before.status == CountStatus::Complete &&
                     result.after.status == CountStatus::Complete &&
                     *result.before.count == *result.after.count;
  return result;
}

QualityReport compare_versions(const ProductDocumentation& doc_a,
                               const ProductDocumentation& doc_b,
                               std::span<const std::string> delta_codes,
                               const CounterConfig& cfg) {
  QualityReport report;
  std::set<std::string> names_a, names_b;
  for (Var v : doc_a.codes) names_a.insert(doc_a.code_name(v));
  for (Var v : doc_b.codes) names_b.insert(doc_b.code_name(v));
  std::set<std::string> all = names_a;
  all.insert(names_b.begin(), names_b.end());
  report.union_size = all.size();
  std::set_difference(names_a.begin(), names_a.end(), names_b.begin(), names_b.end(),
                      std::back_inserter(report.only_in_a));
  std::set_difference(names_b.begin(), names_b.end(), names_a.begin(), names_a.end(),
                      std::back_inserter(report.only_in_b));

  // Each total is computed over its own codes, then scaled to the union;
  // absent codes are unconstrained, so they contribute a factor of two.
  auto scaled_total = [&](const ProductDocumentation& doc) {
    CountResult r = total_configurations(doc, cfg);
    if (r.count) *r.count <<= report.union_size - doc.codes.size();
    r.scope_size = report.union_size;
    return r;
  };
  report.count_a = scaled_total(doc_a);
  report.count_b = scaled_total(doc_b);
  report.complete = report.count_a.status == CountStatus::Complete &&
                    report.count_b.status == CountStatus::Complete;
  if (report.complete && *report.count_b.count != 0) {
    mpq_class ratio(*report.count_a.count, *report.count_b.count);
    ratio.canonicalize();
    report.ratio = ratio;
  }

  // Frequencies are scale-invariant, so own-scope counts suffice per side.
  auto side_frequency = [&](const ProductDocumentation& doc, const std::string& code,
                            const CountResult& scaled) -> std::optional<mpq_class> {
    if (scaled.status != CountStatus::Complete || *scaled.count == 0) return std::nullopt;
    std::optional<Var> v = doc.find_code(code);
    if (!v) {
      if (!all.count(code)) return std::nullopt;  // not a code anywhere
      return mpq_class(1, 2);
    }
    Literal lit{*v, true};
    CountResult with = count_with_options(doc, std::span(&lit, 1), cfg);
    if (with.status != CountStatus::Complete) return std::nullopt;
    mpq_class f(*with.count << (report.union_size - doc.codes.size()), *scaled.count);
    f.canonicalize();
    return f;
  };
  for (const std::string& code : delta_codes) {
    CodeFrequencyDelta delta;
    delta.code = code;
    delta.frequency_a = side_frequency(doc_a, code, report.count_a);
    delta.frequency_b = side_frequency(doc_b, code, report.count_b);
    if (delta.frequency_a && delta.frequency_b)
      delta.delta = *delta.frequency_b - *delta.frequency_a;
    report.deltas.push_back(std::move(delta));
  }
  return report;
}

Order parse_order(std::string_view text, const ProductDocumentation& doc) {
  Order order;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    while (!line.empty()) {
      size_t cut = 0;
      while (cut < line.size() && !std::isspace(static_cast<unsigned char>(line[cut])))
        ++cut;
      std::string_view token = line.substr(0, cut);
      line = trim(line.substr(cut));
      std::optional<Var> code = doc.find_code(token);
      if (!code || *code >= doc.codes.size())
        throw DocumentError(line_no, "unknown code '" + std::string(token) + "'");
      order.chosen.push_back(*code);
    }
  }
  normalize_var_set(order.chosen);
  return order;
}

Verdict process_order(const ProductDocumentation& doc, const Order& order) {
  Arena& arena = *doc.arena;
  const size_t n = doc.codes.size();
  Assignment beta;  // closed world: every unchosen code reads false
  for (Var c : doc.codes) beta.set(c, false);
  std::vector<bool> in(n, false);
  for (Var c : order.chosen) {
    if (c >= n) throw Error("order contains an undeclared code");
    in[c] = true;
    beta.set(c, true);
  }

  // Step 2: full passes in file order until nothing new fires.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const SupplementaryRule& rule : doc.rules) {
      if (in[rule.code]) continue;
      if (arena.evaluate(rule.condition, beta)) {
        in[rule.code] = true;
        beta.set(rule.code, true);
        changed = true;
      }
    }
  }

  // Step 3: applicable conditions are those whose head was chosen plus
  // every global one.
  Verdict verdict;
  for (const ConstructibilityCondition& cc : doc.conditions) {
    bool applicable = !cc.head || in[*cc.head];
    if (applicable && !arena.evaluate(cc.condition, beta))
      verdict.violated.push_back(cc.head ? doc.code_name(*cc.head) : std::string("true"));
  }
  verdict.constructible = verdict.violated.empty();
  for (size_t i = 0; i < n; ++i)
    if (in[i]) verdict.supplemented.push_back(static_cast<Var>(i));
  return verdict;
}

}  // namespace dagcount
