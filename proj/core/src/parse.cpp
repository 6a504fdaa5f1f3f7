#include "dagcount/parse.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

namespace dagcount {

namespace {

enum class Tok { LParen, RParen, Not, And, Or, Impl, Iff, Ident, True, False, End };

struct Token {
  Tok kind;
  std::string_view text;
  int line;
  int column;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_trivia();
    int line = line_, col = column_;
    if (pos_ >= text_.size()) return {Tok::End, {}, line, col};
    char c = text_[pos_];
    switch (c) {
      case '(': advance(); return {Tok::LParen, "(", line, col};
      case ')': advance(); return {Tok::RParen, ")", line, col};
      case '!': advance(); return {Tok::Not, "!", line, col};
      case '&': advance(); return {Tok::And, "&", line, col};
      case '|': advance(); return {Tok::Or, "|", line, col};
      case '-':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          return {Tok::Impl, "->", line, col};
        }
        throw ParseError("expected '->' after '-'", line, col);
      case '<':
        advance();
        if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
          advance();
          advance();
          return {Tok::Iff, "<->", line, col};
        }
        throw ParseError("expected '<->' after '<'", line, col);
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_' || text_[pos_] == '.'))
        advance();
      std::string_view word = text_.substr(start, pos_ - start);
      if (word == "true") return {Tok::True, word, line, col};
      if (word == "false") return {Tok::False, word, line, col};
      return {Tok::Ident, word, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
public:
  Parser(std::string_view text, Arena& arena) : lexer_(text), arena_(arena) {
    bump();
  }

  NodeRef parse() {
    NodeRef f = parse_equiv();
    expect(Tok::End, "end of input");
    return f;
  }

private:
  void bump() { current_ = lexer_.next(); }

  bool accept(Tok kind) {
    if (current_.kind != kind) return false;
    bump();
    return true;
  }

  void expect(Tok kind, const char* what) {
    if (current_.kind != kind)
      throw ParseError(std::string("expected ") + what, current_.line, current_.column);
    bump();
  }

  NodeRef parse_equiv() {
    NodeRef lhs = parse_impl();
    while (accept(Tok::Iff)) lhs = arena_.mk_iff(lhs, parse_impl());
    return lhs;
  }

  NodeRef parse_impl() {
    NodeRef lhs = parse_or();
    if (accept(Tok::Impl)) return arena_.mk_implies(lhs, parse_impl());
    return lhs;
  }

  NodeRef parse_or() {
    std::vector<NodeRef> ops{parse_and()};
    while (accept(Tok::Or)) ops.push_back(parse_and());
    return ops.size() == 1 ? ops[0] : arena_.mk_or(ops);
  }

  NodeRef parse_and() {
    std::vector<NodeRef> ops{parse_unary()};
    while (accept(Tok::And)) ops.push_back(parse_unary());
    return ops.size() == 1 ? ops[0] : arena_.mk_and(ops);
  }

  NodeRef parse_unary() {
    if (accept(Tok::Not)) return arena_.mk_not(parse_unary());
    return parse_atom();
  }

  NodeRef parse_atom() {
    Token tok = current_;
    switch (tok.kind) {
      case Tok::True:
        bump();
        return arena_.true_node();
      case Tok::False:
        bump();
        return arena_.false_node();
      case Tok::Ident:
        bump();
        return arena_.var_node(arena_.intern_var(tok.text));
      case Tok::LParen: {
        bump();
        NodeRef f = parse_equiv();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected identifier, constant, '!' or '('", tok.line, tok.column);
    }
  }

  Lexer lexer_;
  Arena& arena_;
  Token current_;
};

}  // namespace

NodeRef parse_formula(std::string_view text, Arena& arena) {
  return Parser(text, arena).parse();
}

DimacsFile parse_dimacs(std::string_view text, Arena& arena) {
  size_t pos = 0;
  int line = 1;
  auto skip_space = [&] {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == 'c' && (pos == 0 || text[pos - 1] == '\n')) {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  };
  auto read_word = [&]() -> std::string_view {
    skip_space();
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };

  skip_space();
  if (pos >= text.size() || text[pos] != 'p')
    throw ParseError("missing DIMACS header 'p cnf <vars> <clauses>'", line, 1);
  std::string_view p = read_word();
  std::string_view fmt = read_word();
  if (p != "p" || fmt != "cnf")
    throw ParseError("malformed DIMACS header: expected 'p cnf'", line, 1);

  auto parse_int = [&](std::string_view w, const char* what) -> long {
    long value = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (ec != std::errc() || ptr != w.data() + w.size())
      throw ParseError(std::string("malformed DIMACS header: bad ") + what, line, 1);
    return value;
  };
  long declared_vars = parse_int(read_word(), "variable count");
  long declared_clauses = parse_int(read_word(), "clause count");
  if (declared_vars < 0 || declared_clauses < 0)
    throw ParseError("malformed DIMACS header: negative counts", line, 1);

  // All declared variables enter the pool, used or not.
  std::vector<Var> vars(static_cast<size_t>(declared_vars));
  for (long i = 1; i <= declared_vars; ++i)
    vars[static_cast<size_t>(i - 1)] = arena.intern_var("x" + std::to_string(i));

  std::vector<NodeRef> clause_nodes;
  std::vector<NodeRef> current;
  while (true) {
    skip_space();
    if (pos >= text.size()) break;
    if (text[pos] == '%') break;  // SATLIB-style trailer
    int lit_line = line;
    std::string_view w = read_word();
    long lit = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), lit);
    if (ec != std::errc() || ptr != w.data() + w.size())
      throw ParseError("expected integer literal, got '" + std::string(w) + "'", lit_line, 1);
    if (lit == 0) {
      clause_nodes.push_back(arena.mk_or(current));
      current.clear();
      continue;
    }
    long idx = lit < 0 ? -lit : lit;
    if (idx > declared_vars)
      throw ParseError("literal " + std::string(w) + " exceeds declared variable count " +
                           std::to_string(declared_vars),
                       lit_line, 1);
    current.push_back(arena.literal_node(vars[static_cast<size_t>(idx - 1)], lit > 0));
  }
  if (!current.empty())
    throw ParseError("clause not terminated by 0", line, 1);

  return DimacsFile{arena.mk_and(clause_nodes), static_cast<int>(declared_vars)};
}

}  // namespace dagcount
