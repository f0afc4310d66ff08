// imred/syntax.hpp :: text syntax for formulas
//
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "<>" unary | "[]" unary | atom
//   atom    := "false" | VAR | "(" formula ")"
//   VAR     := "p" [1-9][0-9]*

#ifndef IMRED_SYNTAX_HPP
#define IMRED_SYNTAX_HPP

#include <cctype>
#include <cstddef>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "formula.hpp"

namespace imred {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& message, SourceSpan span)
      : std::runtime_error(message + " at offset " + std::to_string(span.begin)), span_(span) {}
  SourceSpan span() const noexcept { return span_; }

private:
  SourceSpan span_;
};

namespace detail {

  class FormulaParser {
  public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parseAll() {
      Formula f = parseImplication();
      skipSpace();
      if (pos_ != text_.size()) fail("expected end of input");
      return f;
    }

  private:
    Formula parseImplication() {
      Formula lhs = parseOr();
      if (accept("->")) return implies(lhs, parseImplication());
      return lhs;
    }

    Formula parseOr() {
      Formula out = parseAnd();
      while (accept("|")) out = disj(out, parseAnd());
      return out;
    }

    Formula parseAnd() {
      Formula out = parseUnary();
      while (accept("&")) out = conj(out, parseUnary());
      return out;
    }

    Formula parseUnary() {
      if (accept("<>")) return diamond(parseUnary());
      if (accept("[]")) return box(parseUnary());
      return parseAtom();
    }

    Formula parseAtom() {
      skipSpace();
      if (accept("(")) {
        Formula inner = parseImplication();
        if (!accept(")")) fail("expected ')'");
        return inner;
      }
      if (acceptWord("false")) return bottom();
      if (pos_ < text_.size() && text_[pos_] == 'p') {
        std::size_t start = pos_++;
        if (pos_ >= text_.size() || text_[pos_] < '1' || text_[pos_] > '9')
          fail("expected variable index >= 1 after 'p'", start);
        std::uint64_t index = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          index = index * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
          if (index > std::numeric_limits<VarIndex>::max()) fail("variable index out of range", start);
          ++pos_;
        }
        if (pos_ < text_.size() && isIdentChar(text_[pos_])) fail("expected variable p<digits>", start);
        return var(static_cast<VarIndex>(index));
      }
      fail("expected 'false', variable, '(', '<>' or '[]'");
    }

    static bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    void skipSpace() {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view token) {
      skipSpace();
      if (text_.substr(pos_, token.size()) != token) return false;
      pos_ += token.size();
      return true;
    }

    bool acceptWord(std::string_view word) {
      if (text_.substr(pos_, word.size()) != word) return false;
      std::size_t after = pos_ + word.size();
      if (after < text_.size() && isIdentChar(text_[after])) return false;
      pos_ = after;
      return true;
    }

    [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }
    [[noreturn]] void fail(const std::string& message, std::size_t begin) {
      std::size_t end = std::max(begin, std::min(pos_ + 1, text_.size()));
      throw SyntaxError(message, SourceSpan{begin, std::min(end, text_.size())});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
  };

  inline int precedence(Connective c) {
    switch (c) {
      case Connective::Implies: return 1;
      case Connective::Or: return 2;
      case Connective::And: return 3;
      default: return 4;
    }
  }

  inline void printTo(std::ostream& out, const Formula& f) {
    switch (f.kind()) {
      case Connective::Var:
        out << 'p' << f.varIndex();
        return;
      case Connective::Bottom:
        out << "false";
        return;
      case Connective::Diamond:
      case Connective::Box: {
        out << (f.kind() == Connective::Diamond ? "<>" : "[]");
        bool paren = isBinary(f.child().kind());
        if (paren) out << '(';
        printTo(out, f.child());
        if (paren) out << ')';
        return;
      }
      default: {
        int p = precedence(f.kind());
        bool rightAssoc = f.kind() == Connective::Implies;
        int lp = precedence(f.left().kind());
        int rp = precedence(f.right().kind());
        bool parenL = lp < p || (lp == p && rightAssoc);
        bool parenR = rp < p || (rp == p && !rightAssoc);
        if (parenL) out << '(';
        printTo(out, f.left());
        if (parenL) out << ')';
        out << (f.kind() == Connective::And ? " & " : f.kind() == Connective::Or ? " | " : " -> ");
        if (parenR) out << '(';
        printTo(out, f.right());
        if (parenR) out << ')';
        return;
      }
    }
  }

} // namespace detail

inline Formula parseFormula(std::string_view text) { return detail::FormulaParser(text).parseAll(); }

// Streams the expanded tree; output size is length-proportional, so this is
// the form to use for large translated formulas.
inline void printFormula(std::ostream& out, const Formula& f) { detail::printTo(out, f); }

inline std::string printFormula(const Formula& f) {
  std::ostringstream out;
  detail::printTo(out, f);
  return out.str();
}

inline std::ostream& operator<<(std::ostream& out, const Formula& f) {
  detail::printTo(out, f);
  return out;
}

} // namespace imred

#endif
