#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ilvelt/formula.hpp"

namespace ilvelt {

/// Syntax error; `offset` is a byte offset into the input, line/column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        offset_(offset), line_(line), column_(column) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t offset_, line_, column_;
};

struct ParseOptions {
  /// Accept capitalized identifiers as schema metavariables.
  bool allow_metavariables = false;
};

namespace detail {

enum class Tok {
  End, LParen, RParen, Not, And, Or, Implies, Iff, Box, Diamond, Rhd, False, True, Ident
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t at = pos_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", at});
        return out;
      }
      const char c = src_[pos_];
      if (is_ident_start(c)) {
        std::size_t end = pos_;
        while (end < src_.size() && is_ident_char(src_[end])) ++end;
        std::string word(src_.substr(pos_, end - pos_));
        pos_ = end;
        if (word == "false") out.push_back({Tok::False, word, at});
        else if (word == "true") out.push_back({Tok::True, word, at});
        else out.push_back({Tok::Ident, word, at});
        continue;
      }
      if (Tok t; match_symbol(t)) {
        out.push_back({t, std::string(src_.substr(at, pos_ - at)), at});
        continue;
      }
      throw error_at("unknown token '" + std::string(1, c) + "'", at);
    }
  }

  ParseError error_at(const std::string& what, std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    return ParseError(what, offset, line, col);
  }

 private:
  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  bool take(std::string_view s) {
    if (src_.substr(pos_, s.size()) == s) { pos_ += s.size(); return true; }
    return false;
  }

  bool match_symbol(Tok& t) {
    struct Sym { std::string_view text; Tok tok; };
    // Longest match first where prefixes overlap.
    static constexpr Sym table[] = {
        {"<->", Tok::Iff}, {"<>", Tok::Diamond}, {"->", Tok::Implies}, {"|>", Tok::Rhd},
        {"[]", Tok::Box}, {"(", Tok::LParen}, {")", Tok::RParen}, {"~", Tok::Not},
        {"&", Tok::And}, {"|", Tok::Or},
        {"⊥", Tok::False}, {"⊤", Tok::True}, {"¬", Tok::Not}, {"∧", Tok::And},
        {"∨", Tok::Or}, {"→", Tok::Implies}, {"↔", Tok::Iff}, {"□", Tok::Box},
        {"◇", Tok::Diamond}, {"▷", Tok::Rhd},
    };
    for (const auto& s : table) {
      if (take(s.text)) { t = s.tok; return true; }
    }
    return false;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// Precedence, loosest first: <->, ->, |>, |, &, then the prefix operators.
// -> and <-> associate to the right, & and | to the left, |> not at all.
class Parser {
 public:
  Parser(std::string_view src, ParseOptions opts) : lexer_(src), toks_(lexer_.run()), opts_(opts) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) throw fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  ParseError fail(const std::string& what) const { return lexer_.error_at(what, peek().offset); }

  Formula parse_iff() {
    Formula l = parse_implies();
    if (accept(Tok::Iff)) return Formula::iff(l, parse_iff());
    return l;
  }

  Formula parse_implies() {
    Formula l = parse_rhd();
    if (accept(Tok::Implies)) return Formula::implies(l, parse_implies());
    return l;
  }

  Formula parse_rhd() {
    Formula l = parse_or();
    if (!accept(Tok::Rhd)) return l;
    Formula r = parse_or();
    if (peek().kind == Tok::Rhd) throw fail("chained |> must be parenthesized");
    return Formula::rhd(l, r);
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (accept(Tok::Or)) l = Formula::disj(l, parse_and());
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (accept(Tok::And)) l = Formula::conj(l, parse_unary());
    return l;
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) return Formula::neg(parse_unary());
    if (accept(Tok::Box)) return Formula::box(parse_unary());
    if (accept(Tok::Diamond)) return Formula::diamond(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::False: ++pos_; return Formula::bottom();
      case Tok::True: ++pos_; return Formula::top();
      case Tok::LParen: {
        ++pos_;
        Formula f = parse_iff();
        if (!accept(Tok::RParen)) throw fail("expected ')'");
        return f;
      }
      case Tok::Ident: {
        if (is_atom_name(t.text)) { ++pos_; return Formula::atom(t.text); }
        if (!opts_.allow_metavariables) throw fail("metavariable '" + t.text + "' not allowed here");
        ++pos_;
        return Formula::meta(t.text);
      }
      case Tok::End: throw fail("unexpected end of input");
      default: throw fail("unexpected '" + t.text + "'");
    }
  }

  Lexer lexer_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
};

}  // namespace detail

/// Parses the ASCII (or Unicode) surface syntax and desugars to the five-constructor core.
inline Formula parse(std::string_view text, ParseOptions opts = {}) {
  return detail::Parser(text, opts).parse_all();
}

/// Parses a schema body: capitalized identifiers are metavariables.
inline Formula parse_schema_body(std::string_view text) {
  return parse(text, ParseOptions{.allow_metavariables = true});
}

}  // namespace ilvelt
