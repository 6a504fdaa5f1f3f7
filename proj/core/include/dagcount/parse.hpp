#pragma once

#include <string_view>

#include "dagcount/formula.hpp"

namespace dagcount {

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Parses the boolean formula grammar:
///
///   formula := equiv
///   equiv   := impl ("<->" impl)*          left associative
///   impl    := or ("->" impl)?             right associative
///   or      := and ("|" and)*
///   and     := unary ("&" unary)*
///   unary   := "!" unary | atom
///   atom    := ident | "true" | "false" | "(" formula ")"
///   ident   := [A-Za-z_][A-Za-z0-9_.]*
///
/// "#" starts a comment running to end of line; whitespace is insignificant.
/// "->" and "<->" are eliminated at construction (a -> b becomes !a | b,
/// a <-> b becomes (!a | b) & (!b | a)). New identifiers are interned into
/// `arena`'s pool.
NodeRef parse_formula(std::string_view text, Arena& arena);

struct DimacsFile {
  NodeRef formula;          // the AND over all clause ORs
  int declared_var_count;   // from the "p cnf" header; may exceed |vars(formula)|
};

/// Parses DIMACS CNF. Variable i of the file is interned as "x<i>"; all
/// declared variables enter the pool even when no clause mentions them.
DimacsFile parse_dimacs(std::string_view text, Arena& arena);

}  // namespace dagcount
