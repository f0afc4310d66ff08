#include <gtest/gtest.h>

#include "imred/imred.hpp"

using namespace imred;

namespace {
Formula p(VarIndex i) { return var(i); }
} // namespace

TEST(Syntax, Precedence) {
  EXPECT_EQ(parseFormula("p1 & p2 | p3 -> p4"), implies(disj(conj(p(1), p(2)), p(3)), p(4)));
  EXPECT_EQ(parseFormula("p1 -> p2 -> p3"), implies(p(1), implies(p(2), p(3))));
  EXPECT_EQ(parseFormula("p1 | p2 | p3"), disj(disj(p(1), p(2)), p(3)));
  EXPECT_EQ(parseFormula("p1 & p2 & p3"), conj(conj(p(1), p(2)), p(3)));
  EXPECT_EQ(parseFormula("<>p1 & p2"), conj(diamond(p(1)), p(2)));
  EXPECT_EQ(parseFormula("[]<>false"), box(diamond(bottom())));
  EXPECT_EQ(parseFormula("  ( p12 )"), p(12));
  EXPECT_EQ(parseFormula("<>(p1 | p2) -> <>p1 | <>p2"),
            implies(diamond(disj(p(1), p(2))), disj(diamond(p(1)), diamond(p(2)))));
}

TEST(Syntax, PrinterUsesMinimalParentheses) {
  EXPECT_EQ(printFormula(implies(implies(p(1), p(2)), p(3))), "(p1 -> p2) -> p3");
  EXPECT_EQ(printFormula(implies(p(1), implies(p(2), p(3)))), "p1 -> p2 -> p3");
  EXPECT_EQ(printFormula(conj(disj(p(1), p(2)), p(3))), "(p1 | p2) & p3");
  EXPECT_EQ(printFormula(disj(p(1), disj(p(2), p(3)))), "p1 | (p2 | p3)");
  EXPECT_EQ(printFormula(diamond(conj(p(1), p(2)))), "<>(p1 & p2)");
  EXPECT_EQ(printFormula(box(diamond(bottom()))), "[]<>false");
  EXPECT_EQ(printFormula(implies(conj(p(1), p(2)), disj(p(1), p(2)))), "p1 & p2 -> p1 | p2");
}

TEST(Syntax, RoundTripOnRandomFormulas) {
  Rng rng(2024);
  RandomFormulaOptions opt;
  opt.vars = 12;
  for (int n = 0; n < 3000; ++n) {
    Formula f = randomFormula(rng, opt, 1 + n % 40);
    std::string text = printFormula(f);
    ASSERT_EQ(parseFormula(text), f) << text;
    EXPECT_EQ(printFormula(parseFormula(text)), text);
  }
}

TEST(Syntax, ErrorSpans) {
  struct Case {
    const char* text;
    std::size_t begin;
  };
  for (Case c : {Case{"p1 -> ", 6}, Case{"(p1 & p2", 8}, Case{"p1 p2", 3}, Case{"p0", 0}, Case{"q1", 0},
                 Case{"p1 & & p2", 5}, Case{"falsey", 0}, Case{"p1x", 0}, Case{"", 0}}) {
    try {
      parseFormula(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const SyntaxError& e) {
      EXPECT_EQ(e.span().begin, c.begin) << c.text << ": " << e.what();
      EXPECT_LE(e.span().end, std::string_view(c.text).size());
      EXPECT_NE(std::string(e.what()).find("expected"), std::string::npos);
    }
  }
}

TEST(Syntax, VariableIndexBounds) {
  EXPECT_EQ(parseFormula("p4294967295").varIndex(), 4294967295u);
  EXPECT_THROW(parseFormula("p4294967296"), SyntaxError);
}
