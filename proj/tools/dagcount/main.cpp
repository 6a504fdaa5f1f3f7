// dagcount: exact model counting and product-configuration analytics.
//
// Subcommands: count, transform, analyze, oracle. Exit codes: 0 success,
// 1 input or usage error, 2 timeout or resource refusal, 3 analysis found
// a problem (refused order, nonzero overlap, flagged position).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dagcount/cnf.hpp"
#include "dagcount/counter.hpp"
#include "dagcount/oracle.hpp"
#include "dagcount/parse.hpp"
#include "dagcount/product.hpp"
#include "dagcount/report.hpp"

using json = nlohmann::ordered_json;
using namespace dagcount;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitVerdict = 3;

struct InputRecord {
  std::string path;
  std::string digest;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

// Collects inputs, assembles the run report and prints it at scope exit.
struct Run {
  std::string command;
  bool json_output = false;
  std::vector<InputRecord> inputs;
  json args = json::object();
  json result = json::object();
  std::string status = "complete";
  std::vector<std::string> lines;  // human-readable form
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  std::string load(const std::string& path) {
    std::string text = read_input(path);
    inputs.push_back({path, "fnv1a:" + fnv1a_hex(text)});
    return text;
  }

  void line(const std::string& s) { lines.push_back(s); }

  int finish(int exit_code) {
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  started)
            .count();
    if (json_output) {
      json report;
      report["command"] = command;
      report["args"] = args;
      json in = json::array();
      for (const InputRecord& rec : inputs)
        in.push_back({{"path", rec.path}, {"digest", rec.digest}});
      report["inputs"] = in;
      report["result"] = result;
      report["status"] = status;
      report["exit"] = exit_code;
      report["wall_ms"] = wall_ms;
      std::cout << report.dump(2) << "\n";
    } else {
      for (const std::string& s : lines) std::cout << s << "\n";
      std::printf("time: %.1f ms\n", wall_ms);
    }
    return exit_code;
  }
};

const char* status_name(CountStatus s) {
  switch (s) {
    case CountStatus::Complete: return "complete";
    case CountStatus::Timeout: return "timeout";
    case CountStatus::MemoryLimit: return "memory-limit";
  }
  return "complete";
}

json stats_json(const CounterStats& s) {
  json j;
  j["decisions"] = s.decisions;
  j["propagations"] = s.propagations;
  j["conflicts"] = s.conflicts;
  j["component_splits"] = s.component_splits;
  j["cache_lookups"] = s.cache_lookups;
  j["cache_hits"] = s.cache_hits;
  j["peak_cache_entries"] = s.peak_cache_entries;
  j["elapsed_seconds"] = s.elapsed_seconds;
  return j;
}

json count_json(const CountResult& r) {
  json j;
  j["status"] = status_name(r.status);
  if (r.count) {
    j["count"] = r.count->get_str();
    j["count_sci"] = render_scientific2(*r.count);
  }
  j["scope_size"] = r.scope_size;
  j["trivially_inconsistent"] = r.trivially_inconsistent;
  j["stats"] = stats_json(r.stats);
  return j;
}

void describe_count(Run& run, const CountResult& r) {
  if (r.count)
    run.line("count: " + r.count->get_str() + " (" + render_scientific2(*r.count) + ")");
  run.line("status: " + std::string(status_name(r.status)));
  run.line("scope: " + std::to_string(r.scope_size) + " variables");
  run.line("decisions: " + std::to_string(r.stats.decisions) +
           "  propagations: " + std::to_string(r.stats.propagations) +
           "  conflicts: " + std::to_string(r.stats.conflicts) +
           "  splits: " + std::to_string(r.stats.component_splits));
  run.line("cache: " + std::to_string(r.stats.cache_lookups) + " lookups, " +
           std::to_string(r.stats.cache_hits) + " hits, peak " +
           std::to_string(r.stats.peak_cache_entries));
}

// Shared flag bundles -------------------------------------------------------

struct CounterFlags {
  double timeout_seconds = 0.0;  // 0: none
  int64_t cache_max = -1;        // -1: unbounded
  std::string heuristic = "occ";
  uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--timeout", timeout_seconds, "abort the count after this many seconds");
    cmd->add_option("--cache-max", cache_max,
                    "component cache entry limit (0 disables caching)");
    cmd->add_option("--heuristic", heuristic, "branch heuristic: occ, occ-random, lowest")
        ->check(CLI::IsMember({"occ", "occ-random", "lowest"}));
    cmd->add_option("--seed", seed, "seed for randomized tie-breaking");
  }

  CounterConfig config() const {
    CounterConfig cfg;
    if (timeout_seconds > 0.0)
      cfg.timeout = std::chrono::duration<double>(timeout_seconds);
    if (cache_max >= 0) cfg.cache_capacity = static_cast<uint64_t>(cache_max);
    cfg.heuristic = *branch_heuristic_from_name(heuristic);
    cfg.seed = seed;
    return cfg;
  }

  void echo(json& args) const {
    args["timeout"] = timeout_seconds;
    args["cache_max"] = cache_max;
    args["heuristic"] = heuristic;
    args["seed"] = seed;
  }
};

struct FormulaInput {
  std::string path = "-";
  std::string format = "auto";
  std::string scope = "declared";

  void attach(CLI::App* cmd) {
    cmd->add_option("input", path, "formula file, or - for stdin");
    cmd->add_option("--format", format, "input format")
        ->check(CLI::IsMember({"auto", "bool", "dimacs"}));
    cmd->add_option("--scope", scope,
                    "counting scope: 'declared' or a comma-separated variable list");
  }
};

bool looks_like_dimacs(std::string_view text) {
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    size_t start = line.find_first_not_of(" \t\r");
    if (start != std::string_view::npos && line.substr(start).starts_with("p "))
      return true;
    if (pos > text.size()) break;
  }
  return false;
}

struct LoadedFormula {
  Arena arena;
  NodeRef formula = 0;
  VarSet scope;
  std::string format;
};

void load_formula(Run& run, const FormulaInput& in, LoadedFormula& out) {
  std::string text = run.load(in.path);
  std::string format = in.format;
  if (format == "auto") format = looks_like_dimacs(text) ? "dimacs" : "bool";
  out.format = format;
  if (format == "dimacs") {
    DimacsFile file = parse_dimacs(text, out.arena);
    out.formula = file.formula;
  } else {
    out.formula = parse_formula(text, out.arena);
  }
  if (in.scope == "declared") {
    out.scope = out.arena.all_vars();
  } else {
    std::stringstream list(in.scope);
    std::string name;
    while (std::getline(list, name, ',')) {
      size_t a = name.find_first_not_of(" \t");
      size_t b = name.find_last_not_of(" \t");
      if (a == std::string::npos) continue;
      out.scope.push_back(out.arena.intern_var(name.substr(a, b - a + 1)));
    }
    normalize_var_set(out.scope);
  }
  run.args["format"] = format;
  run.args["scope"] = in.scope;
}

std::vector<Literal> parse_assumptions(const std::string& literals, Arena& arena) {
  std::vector<Literal> out;
  std::stringstream list(literals);
  std::string token;
  while (std::getline(list, token, ',')) {
    size_t a = token.find_first_not_of(" \t");
    size_t b = token.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    std::string name = token.substr(a, b - a + 1);
    bool value = true;
    if (name[0] == '!' || name[0] == '-') {
      value = false;
      name = name.substr(1);
    }
    std::optional<Var> var = arena.find_var(name);
    if (!var) throw Error("unknown variable '" + name + "' in --assume");
    out.push_back({*var, value});
  }
  return out;
}

// count ----------------------------------------------------------------------

int run_count(Run& run, const FormulaInput& input, const CounterFlags& flags,
              const std::string& assume) {
  LoadedFormula loaded;
  load_formula(run, input, loaded);
  run.args["assume"] = assume;
  flags.echo(run.args);

  CountResult result;
  if (assume.empty()) {
    result = count_models(loaded.arena, loaded.formula, loaded.scope, flags.config());
  } else {
    std::vector<Literal> lits = parse_assumptions(assume, loaded.arena);
    result = count_with_assumptions(loaded.arena, loaded.formula, loaded.scope, lits,
                                    flags.config());
  }
  run.result = count_json(result);
  run.status = status_name(result.status);
  describe_count(run, result);
  return result.status == CountStatus::Complete ? kExitOk : kExitTimeout;
}

// transform ------------------------------------------------------------------

int run_transform(Run& run, const FormulaInput& input, const std::string& out_path,
                  const std::string& variant, bool aux_comments) {
  LoadedFormula loaded;
  load_formula(run, input, loaded);
  run.args["variant"] = variant;
  run.args["aux_comments"] = aux_comments;

  CnfDocument doc = variant == "impl"
                        ? tseitin_implication(loaded.arena, loaded.formula, loaded.scope)
                        : tseitin_equivalence(loaded.arena, loaded.formula, loaded.scope);
  std::string dimacs = write_dimacs(doc, aux_comments);
  if (out_path == "-") {
    // Raw text would corrupt a JSON report on the same stream; embed it.
    if (run.json_output)
      run.result["dimacs"] = dimacs;
    else
      std::cout << dimacs;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + out_path + "'");
    out << dimacs;
  }

  run.result["variables"] = doc.declared_var_count;
  run.result["source_variables"] = doc.source_vars.size();
  run.result["aux_variables"] = doc.aux_map.size();
  run.result["clauses"] = doc.clauses.size();
  run.result["root_literal"] = doc.root_literal;
  run.result["output"] = out_path;
  run.line("variables: " + std::to_string(doc.declared_var_count) + " (" +
           std::to_string(doc.aux_map.size()) + " auxiliary)");
  run.line("clauses: " + std::to_string(doc.clauses.size()));
  return kExitOk;
}

// analyze --------------------------------------------------------------------

json frequency_json(const mpz_class& numerator, const mpz_class& denominator) {
  mpq_class rational(numerator, denominator);
  rational.canonicalize();
  json j;
  j["numerator"] = numerator.get_str();
  j["denominator"] = denominator.get_str();
  j["rational"] = rational.get_str();
  j["decimal"] = render_decimal(rational);
  return j;
}

int run_analyze_total(Run& run, const ProductDocumentation& doc,
                      const CounterFlags& flags) {
  CountResult result = total_configurations(doc, flags.config());
  run.result = count_json(result);
  run.status = status_name(result.status);
  describe_count(run, result);
  return result.status == CountStatus::Complete ? kExitOk : kExitTimeout;
}

int run_analyze_freq(Run& run, const ProductDocumentation& doc, const CounterFlags& flags,
                     const std::string& code) {
  std::optional<Var> var = doc.find_code(code);
  if (!var || *var >= doc.codes.size()) throw Error("unknown code '" + code + "'");
  CountResult total = total_configurations(doc, flags.config());
  if (total.status != CountStatus::Complete) {
    run.status = status_name(total.status);
    run.result["total"] = count_json(total);
    return kExitTimeout;
  }
  if (*total.count == 0) throw Error("documentation void: no valid configuration");
  Literal lit{*var, true};
  CountResult with = count_with_options(doc, std::span(&lit, 1), flags.config());
  if (with.status != CountStatus::Complete) {
    run.status = status_name(with.status);
    run.result["total"] = count_json(total);
    return kExitTimeout;
  }
  run.result["code"] = code;
  run.result["frequency"] = frequency_json(*with.count, *total.count);
  run.result["total"] = count_json(total);
  run.result["with_option"] = count_json(with);
  mpq_class rational(*with.count, *total.count);
  rational.canonicalize();
  run.line("freq(" + code + ") = " + with.count->get_str() + "/" +
           total.count->get_str() + " = " + render_decimal(rational));
  return kExitOk;
}

int run_analyze_parts(Run& run, const ProductDocumentation& doc, const CounterFlags& flags,
                      const std::string& position) {
  PositionReport report = position_report(doc, position, flags.config());
  bool timed_out = false;
  json variants = json::array();
  for (const VariantCount& v : report.variants) {
    json row = count_json(v.result);
    row["variant"] = v.variant_id;
    timed_out |= v.result.status != CountStatus::Complete;
    variants.push_back(row);
    run.line("variant " + report.position_id + "." + v.variant_id + ": " +
             (v.result.count ? v.result.count->get_str() : "?") + " orders");
  }
  json overlaps = json::array();
  for (const OverlapEntry& o : report.overlaps) {
    json row;
    row["variant_a"] = o.variant_a;
    row["variant_b"] = o.variant_b;
    row["flagged"] = o.flagged;
    row["result"] = count_json(o.result);
    timed_out |= o.result.status != CountStatus::Complete;
    overlaps.push_back(row);
    if (o.flagged)
      run.line("ERROR: variants " + o.variant_a + " and " + o.variant_b +
               " overlap in " + o.result.count->get_str() + " orders");
  }
  run.result["position"] = report.position_id;
  run.result["variants"] = variants;
  run.result["overlaps"] = overlaps;
  run.result["any_flagged"] = report.any_flagged;
  if (report.any_flagged) {
    run.status = "flagged";
    return kExitVerdict;
  }
  if (timed_out) {
    run.status = "timeout";
    return kExitTimeout;
  }
  run.line("position " + report.position_id + ": variants are mutually exclusive");
  return kExitOk;
}

const BomVariant* find_variant(const ProductDocumentation& doc,
                               const std::string& part_ref) {
  size_t dot = part_ref.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == part_ref.size())
    throw Error("expected '<position>.<variant>', got '" + part_ref + "'");
  const BomPosition* position = doc.find_position(part_ref.substr(0, dot));
  if (!position) throw Error("unknown position '" + part_ref.substr(0, dot) + "'");
  for (const BomVariant& v : position->variants)
    if (v.variant_id == part_ref.substr(dot + 1)) return &v;
  throw Error("unknown variant '" + part_ref + "'");
}

int run_analyze_overlap(Run& run, const ProductDocumentation& doc,
                        const CounterFlags& flags, const std::string& part_a,
                        const std::string& part_b) {
  const BomVariant* a = find_variant(doc, part_a);
  const BomVariant* b = find_variant(doc, part_b);
  CountResult result = overlap_count(doc, a->selection, b->selection, flags.config());
  run.result["part_a"] = part_a;
  run.result["part_b"] = part_b;
  run.result["overlap"] = count_json(result);
  run.status = status_name(result.status);
  if (result.status != CountStatus::Complete) return kExitTimeout;
  run.line("overlap(" + part_a + ", " + part_b + ") = " + result.count->get_str());
  if (*result.count != 0) {
    run.status = "flagged";
    return kExitVerdict;
  }
  return kExitOk;
}

int run_analyze_redundant(Run& run, const ProductDocumentation& doc,
                          const CounterFlags& flags, const std::string& formula_path) {
  std::string text = run.load(formula_path);
  NodeRef candidate = parse_formula(text, *doc.arena);
  RedundancyResult result = redundancy_check(doc, candidate, flags.config());
  run.result["before"] = count_json(result.before);
  run.result["after"] = count_json(result.after);
  run.result["redundant"] = result.redundant;
  if (result.before.status != CountStatus::Complete ||
      result.after.status != CountStatus::Complete) {
    run.status = "timeout";
    return kExitTimeout;
  }
  run.line(result.redundant
               ? "candidate is redundant: count stays " + result.before.count->get_str()
               : "candidate changes the count: " + result.before.count->get_str() +
                     " -> " + result.after.count->get_str());
  return kExitOk;
}

int run_analyze_compare(Run& run, const ProductDocumentation& doc,
                        const CounterFlags& flags, const std::string& other_path,
                        const std::string& codes_list) {
  ProductDocumentation other = parse_documentation(run.load(other_path));
  std::vector<std::string> codes;
  std::stringstream list(codes_list);
  std::string name;
  while (std::getline(list, name, ','))
    if (!name.empty()) codes.push_back(name);
  QualityReport report = compare_versions(doc, other, codes, flags.config());

  run.result["count_a"] = count_json(report.count_a);
  run.result["count_b"] = count_json(report.count_b);
  run.result["union_size"] = report.union_size;
  run.result["only_in_a"] = report.only_in_a;
  run.result["only_in_b"] = report.only_in_b;
  if (report.ratio) {
    run.result["ratio"] = report.ratio->get_str();
    run.result["ratio_decimal"] = render_decimal(*report.ratio);
  }
  json deltas = json::array();
  for (const CodeFrequencyDelta& d : report.deltas) {
    json row;
    row["code"] = d.code;
    if (d.frequency_a) row["frequency_a"] = render_decimal(*d.frequency_a);
    if (d.frequency_b) row["frequency_b"] = render_decimal(*d.frequency_b);
    if (d.delta) row["delta"] = render_decimal(*d.delta);
    deltas.push_back(row);
  }
  run.result["deltas"] = deltas;
  run.result["complete"] = report.complete;

  if (report.count_a.count)
    run.line("version A: " + report.count_a.count->get_str() + " configurations");
  if (report.count_b.count)
    run.line("version B: " + report.count_b.count->get_str() + " configurations");
  if (report.ratio) run.line("ratio A/B: " + report.ratio->get_str());
  if (!report.complete) {
    run.status = "timeout";
    return kExitTimeout;
  }
  return kExitOk;
}

int run_analyze_order(Run& run, const ProductDocumentation& doc,
                      const std::string& order_path) {
  Order order = parse_order(run.load(order_path), doc);
  Verdict verdict = process_order(doc, order);
  json chosen = json::array();
  for (Var c : order.chosen) chosen.push_back(doc.code_name(c));
  json supplemented = json::array();
  for (Var c : verdict.supplemented) supplemented.push_back(doc.code_name(c));
  run.result["chosen"] = chosen;
  run.result["supplemented"] = supplemented;
  run.result["constructible"] = verdict.constructible;
  run.result["violated"] = verdict.violated;

  std::string supp;
  for (Var c : verdict.supplemented) supp += (supp.empty() ? "" : " ") + doc.code_name(c);
  run.line("supplemented order: " + supp);
  if (verdict.constructible) {
    run.line("verdict: constructible");
    return kExitOk;
  }
  std::string heads;
  for (const std::string& h : verdict.violated)
    heads += (heads.empty() ? "" : " ") + h;
  run.line("verdict: refused (violated heads: " + heads + ")");
  run.status = "refused";
  return kExitVerdict;
}

// oracle ---------------------------------------------------------------------

int run_oracle(Run& run, const FormulaInput& input, int max_vars, int list_limit) {
  LoadedFormula loaded;
  load_formula(run, input, loaded);
  run.args["max_vars"] = max_vars;
  run.args["list"] = list_limit;

  OracleLimit limit{static_cast<size_t>(max_vars)};
  mpz_class count = enumerate_count(loaded.arena, loaded.formula, loaded.scope, limit);
  run.result["count"] = count.get_str();
  run.result["count_sci"] = render_scientific2(count);
  run.result["scope_size"] = loaded.scope.size();
  run.line("count: " + count.get_str() + " (" + render_scientific2(count) + ")");
  if (list_limit > 0) {
    std::vector<Assignment> models = enumerate_models(
        loaded.arena, loaded.formula, loaded.scope, static_cast<size_t>(list_limit), limit);
    json rows = json::array();
    for (const Assignment& m : models) {
      json row = json::object();
      std::string human;
      for (auto [var, value] : m.sorted_items()) {
        row[loaded.arena.var_name(var)] = value;
        human += (human.empty() ? "" : " ") + loaded.arena.var_name(var) +
                 (value ? "=1" : "=0");
      }
      rows.push_back(row);
      run.line(human);
    }
    run.result["models"] = rows;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact model counting over boolean formula DAGs"};
  app.require_subcommand(1);
  bool json_output = false;
  app.add_flag("--json", json_output, "emit a machine-readable run report");

  // count
  auto* count_cmd = app.add_subcommand("count", "count the models of a formula");
  count_cmd->fallthrough();
  FormulaInput count_input;
  count_input.attach(count_cmd);
  CounterFlags count_flags;
  count_flags.attach(count_cmd);
  std::string assume;
  count_cmd->add_option("--assume", assume,
                        "comma-separated literals fixed during the count (!x negates)");

  // transform
  auto* transform_cmd =
      app.add_subcommand("transform", "translate a formula to CNF in DIMACS form");
  transform_cmd->fallthrough();
  FormulaInput transform_input;
  transform_input.attach(transform_cmd);
  std::string transform_out = "-";
  transform_cmd->add_option("output", transform_out, "DIMACS output path, or - for stdout");
  std::string variant = "equiv";
  transform_cmd->add_option("--variant", variant,
                            "equiv preserves the model count, impl only satisfiability")
      ->check(CLI::IsMember({"impl", "equiv"}));
  bool aux_comments = false;
  transform_cmd->add_flag("--aux-comments", aux_comments,
                          "document auxiliary variables in comment lines");

  // analyze
  auto* analyze_cmd =
      app.add_subcommand("analyze", "product-documentation analytics");
  analyze_cmd->fallthrough();
  std::string doc_path;
  analyze_cmd->add_option("doc", doc_path, "documentation rules file")->required();
  CounterFlags analyze_flags;
  analyze_flags.attach(analyze_cmd);
  analyze_cmd->require_subcommand(1);
  auto* total_cmd = analyze_cmd->add_subcommand("total", "count all valid configurations");
  total_cmd->fallthrough();
  auto* freq_cmd = analyze_cmd->add_subcommand("freq", "relative frequency of an option");
  freq_cmd->fallthrough();
  std::string freq_code;
  freq_cmd->add_option("code", freq_code, "option code")->required();
  auto* parts_cmd =
      analyze_cmd->add_subcommand("parts", "per-variant counts and overlaps of a position");
  parts_cmd->fallthrough();
  std::string parts_position;
  parts_cmd->add_option("position", parts_position, "BOM position id")->required();
  auto* overlap_cmd =
      analyze_cmd->add_subcommand("overlap", "orders selecting two parts at once");
  overlap_cmd->fallthrough();
  std::string overlap_a, overlap_b;
  overlap_cmd->add_option("part_a", overlap_a, "<position>.<variant>")->required();
  overlap_cmd->add_option("part_b", overlap_b, "<position>.<variant>")->required();
  auto* redundant_cmd =
      analyze_cmd->add_subcommand("redundant", "does a candidate constraint change anything");
  redundant_cmd->fallthrough();
  std::string redundant_path;
  redundant_cmd->add_option("formula", redundant_path, "file with the candidate formula")
      ->required();
  auto* compare_cmd =
      analyze_cmd->add_subcommand("compare", "compare against another documentation version");
  compare_cmd->fallthrough();
  std::string compare_path;
  compare_cmd->add_option("docB", compare_path, "second documentation file")->required();
  std::string compare_codes;
  compare_cmd->add_option("--codes", compare_codes,
                          "comma-separated codes to report frequency deltas for");
  auto* order_cmd = analyze_cmd->add_subcommand("order", "process a customer order");
  order_cmd->fallthrough();
  std::string order_path;
  order_cmd->add_option("order", order_path, "order file (whitespace-separated codes)")
      ->required();

  // oracle
  auto* oracle_cmd =
      app.add_subcommand("oracle", "exhaustive-enumeration reference count");
  oracle_cmd->fallthrough();
  FormulaInput oracle_input;
  oracle_input.attach(oracle_cmd);
  int max_vars = 30;
  oracle_cmd->add_option("--max-vars", max_vars, "refuse scopes larger than this");
  int list_limit = 0;
  oracle_cmd->add_option("--list", list_limit, "also list the first N models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Fold CLI11's assorted usage-error codes into the documented exit 1;
    // --help and --version still leave with 0.
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  Run run;
  run.json_output = json_output;
  try {
    if (count_cmd->parsed()) {
      run.command = "count";
      return run.finish(run_count(run, count_input, count_flags, assume));
    }
    if (transform_cmd->parsed()) {
      run.command = "transform";
      return run.finish(
          run_transform(run, transform_input, transform_out, variant, aux_comments));
    }
    if (analyze_cmd->parsed()) {
      ProductDocumentation doc = parse_documentation(run.load(doc_path));
      analyze_flags.echo(run.args);
      if (total_cmd->parsed()) {
        run.command = "analyze total";
        return run.finish(run_analyze_total(run, doc, analyze_flags));
      }
      if (freq_cmd->parsed()) {
        run.command = "analyze freq";
        run.args["code"] = freq_code;
        return run.finish(run_analyze_freq(run, doc, analyze_flags, freq_code));
      }
      if (parts_cmd->parsed()) {
        run.command = "analyze parts";
        run.args["position"] = parts_position;
        return run.finish(run_analyze_parts(run, doc, analyze_flags, parts_position));
      }
      if (overlap_cmd->parsed()) {
        run.command = "analyze overlap";
        return run.finish(
            run_analyze_overlap(run, doc, analyze_flags, overlap_a, overlap_b));
      }
      if (redundant_cmd->parsed()) {
        run.command = "analyze redundant";
        return run.finish(run_analyze_redundant(run, doc, analyze_flags, redundant_path));
      }
      if (compare_cmd->parsed()) {
        run.command = "analyze compare";
        run.args["codes"] = compare_codes;
        return run.finish(
            run_analyze_compare(run, doc, analyze_flags, compare_path, compare_codes));
      }
      if (order_cmd->parsed()) {
        run.command = "analyze order";
        return run.finish(run_analyze_order(run, doc, order_path));
      }
    }
    if (oracle_cmd->parsed()) {
      run.command = "oracle";
      return run.finish(run_oracle(run, oracle_input, max_vars, list_limit));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
