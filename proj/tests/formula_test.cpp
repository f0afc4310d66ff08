#include <gtest/gtest.h>

#include <thread>

#include "imred/imred.hpp"

using namespace imred;

namespace {

// Tree-walking reference metrics, no caching and no sharing.
std::uint64_t treeLength(const Formula& f) {
  switch (f.kind()) {
    case Connective::Var: {
      std::uint64_t bits = 0;
      for (std::uint64_t v = f.varIndex(); v; v /= 2) ++bits;
      return 1 + bits;
    }
    case Connective::Bottom: return 1;
    case Connective::Diamond:
    case Connective::Box: return 1 + treeLength(f.child());
    default: return 1 + treeLength(f.left()) + treeLength(f.right());
  }
}

std::size_t treeDepth(const Formula& f) {
  switch (f.kind()) {
    case Connective::Var:
    case Connective::Bottom: return 0;
    case Connective::Diamond:
    case Connective::Box: return 1 + treeDepth(f.child());
    default: return std::max(treeDepth(f.left()), treeDepth(f.right()));
  }
}

bool treePositive(const Formula& f) {
  switch (f.kind()) {
    case Connective::Var: return true;
    case Connective::Bottom: return false;
    case Connective::Diamond:
    case Connective::Box: return treePositive(f.child());
    default: return treePositive(f.left()) && treePositive(f.right());
  }
}

void treeVars(const Formula& f, VarSet& out) {
  if (f.kind() == Connective::Var) out.insert(f.varIndex());
  else if (isBinary(f.kind())) treeVars(f.left(), out), treeVars(f.right(), out);
  else if (isModal(f.kind())) treeVars(f.child(), out);
}

} // namespace

TEST(Formula, StructuralEqualityIsIdentity) {
  Formula a = implies(conj(var(1), diamond(var(2))), box(bottom()));
  Formula b = implies(conj(var(1), diamond(var(2))), box(bottom()));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.id(), b.id());
  EXPECT_NE(a, implies(conj(var(2), diamond(var(1))), box(bottom())));
  EXPECT_NE(conj(var(1), var(2)), disj(var(1), var(2)));
  EXPECT_NE(diamond(var(1)), box(var(1)));
}

TEST(Formula, VariableLengths) {
  EXPECT_EQ(length(var(1)), 2u);
  EXPECT_EQ(length(var(2)), 3u);
  EXPECT_EQ(length(var(3)), 3u);
  EXPECT_EQ(length(var(4)), 4u);
  EXPECT_EQ(length(var(1000)), 11u);
  EXPECT_EQ(length(bottom()), 1u);
  EXPECT_EQ(length(implies(var(1), var(1))), 5u);
}

TEST(Formula, MetricsMatchTreeWalk) {
  Rng rng(11);
  RandomFormulaOptions opt;
  opt.vars = 9;
  for (int n = 0; n < 500; ++n) {
    Formula f = randomFormula(rng, opt, 1 + n % 60);
    EXPECT_EQ(f.length(), treeLength(f));
    EXPECT_EQ(f.mdepth(), treeDepth(f));
    EXPECT_EQ(f.isPositive(), treePositive(f));
    VarSet vs;
    treeVars(f, vs);
    EXPECT_EQ(varset(f), vs);
    EXPECT_EQ(f.maxVar(), vs.empty() ? 0u : *vs.rbegin());
  }
}

TEST(Formula, LengthOverflowIsReported) {
  Formula f = var(1);
  EXPECT_THROW(
      {
        for (int i = 0; i < 80; ++i) f = conj(f, f);
      },
      std::overflow_error);
}

TEST(Formula, SharedDagStaysSmall) {
  Formula f = var(1);
  for (int i = 0; i < 40; ++i) f = implies(f, f);
  EXPECT_EQ(dagSize(f), 41u);
  EXPECT_EQ(f.length(), (std::uint64_t{1} << 40) * 3 - 1);
}

TEST(Formula, Chains) {
  Formula p = var(1);
  EXPECT_EQ(diamondChain(0, p), p);
  EXPECT_EQ(boxChain(0, p), p);
  EXPECT_EQ(diamondChain(2, p), disj(p, disj(diamond(p), diamond(diamond(p)))));
  EXPECT_EQ(boxChain(2, p), conj(p, conj(box(p), box(box(p)))));
}

TEST(Formula, ConjAllIsLeftNested) {
  Formula a = var(1), b = var(2), c = var(3);
  EXPECT_EQ(conjAll({a, b, c}), conj(conj(a, b), c));
  EXPECT_EQ(disjAll({a, b, c}), disj(disj(a, b), c));
  EXPECT_EQ(conjAll({a}), a);
  EXPECT_THROW(conjAll({}), std::invalid_argument);
}

TEST(Formula, Substitution) {
  Formula f = implies(diamond(var(1)), disj(var(2), bottom()));
  EXPECT_EQ(substitute(f, {}), f);
  EXPECT_EQ(substitute(f, {{1, var(3)}}), implies(diamond(var(3)), disj(var(2), bottom())));
  EXPECT_EQ(substitute(f, {{1, var(2)}, {2, var(1)}}), implies(diamond(var(2)), disj(var(1), bottom())));
  EXPECT_EQ(replaceBottom(f, var(7)), implies(diamond(var(1)), disj(var(2), var(7))));
  Formula pos = conj(var(1), box(var(2)));
  EXPECT_EQ(replaceBottom(pos, var(5)), pos);
}

TEST(Formula, ConcurrentInterningAgrees) {
  std::vector<const void*> ids(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      Formula f = var(1);
      for (int i = 0; i < 200; ++i) f = implies(diamond(f), box(var(2)));
      ids[t] = f.id();
      static std::mutex keep;
      static std::vector<Formula> alive;
      std::lock_guard lock(keep);
      alive.push_back(f);
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) EXPECT_EQ(ids[t], ids[0]);
}
