#include <gtest/gtest.h>

#include <set>

#include "imred/imred.hpp"

using namespace imred;

namespace {

SearchBudget budget(std::size_t worlds, std::size_t points, VarIndex vars) {
  SearchBudget b;
  b.maxWorlds = worlds;
  b.maxPoints = points;
  b.varBound = vars;
  return b;
}

// Rooted frames up to relabelling, by brute force over every order, domain
// and relation, canonicalised by the least encoding over all relabellings.
std::size_t bruteForceFrameClasses(std::size_t maxWorlds, std::size_t maxPoints, FrameKind kind) {
  std::size_t total = 0;
  for (std::size_t n = 1; n <= maxWorlds; ++n)
    for (std::size_t m = 1; m <= maxPoints; ++m) {
      std::set<std::vector<std::uint64_t>> classes;
      const std::size_t pairs = n * n;
      for (std::uint64_t rel = 0; rel < (std::uint64_t{1} << pairs); ++rel) {
        std::vector<WorldSet> above(n, 0);
        for (std::size_t w = 0; w < n; ++w)
          for (std::size_t v = 0; v < n; ++v)
            if ((rel >> (w * n + v)) & 1u) above[w] |= bit(v);
        bool order = above[0] == fullMask(n);
        for (std::size_t w = 0; w < n && order; ++w) {
          if (!contains(above[w], w)) order = false;
          for (std::size_t v = 0; v < n; ++v) {
            if (v != w && contains(above[w], v) && contains(above[v], w)) order = false;
            if (contains(above[w], v) && (above[v] & ~above[w])) order = false;
          }
        }
        if (!order) continue;
        // domains
        std::vector<PointSet> dom(n);
        auto pickDomains = [&](auto&& self, std::size_t w) -> void {
          if (w == n) {
            for (std::size_t a = 0; a < n; ++a)
              for (std::size_t b = 0; b < n; ++b)
                if (contains(above[a], b) && (dom[a] & ~dom[b])) return;
            if (!contains(dom[0], 0)) return;
            // relations: each S_w(x) a subset of dom[w]
            std::vector<std::vector<PointSet>> S(n, std::vector<PointSet>(m, 0));
            std::vector<std::pair<std::size_t, std::size_t>> slots;
            for (std::size_t a = 0; a < n; ++a)
              forEachMember(dom[a], [&](std::size_t x) { slots.push_back({a, x}); });
            auto pickS = [&](auto&& selfS, std::size_t k) -> void {
              if (k == slots.size()) {
                for (std::size_t a = 0; a < n; ++a)
                  for (std::size_t b = 0; b < n; ++b)
                    if (contains(above[a], b))
                      for (std::size_t x = 0; x < m; ++x)
                        if (S[a][x] & ~S[b][x]) return;
                PointSet reach = 1;
                for (bool grew = true; grew;) {
                  grew = false;
                  for (std::size_t a = 0; a < n; ++a)
                    forEachMember(reach, [&](std::size_t x) {
                      if (S[a][x] & ~reach) reach |= S[a][x], grew = true;
                    });
                }
                if (reach != fullMask(m)) return;
                std::vector<std::size_t> wp(n), pp(m);
                std::iota(wp.begin(), wp.end(), 0);
                std::vector<std::uint64_t> best;
                do {
                  std::iota(pp.begin(), pp.end(), 0);
                  do {
                    std::vector<std::uint64_t> code(n * (2 + m), 0);
                    for (std::size_t a = 0; a < n; ++a) {
                      WorldSet up = 0;
                      forEachMember(above[a], [&](std::size_t b) { up |= bit(wp[b]); });
                      code[wp[a] * (2 + m)] = up;
                      PointSet d = 0;
                      forEachMember(dom[a], [&](std::size_t x) { d |= bit(pp[x]); });
                      code[wp[a] * (2 + m) + 1] = d;
                      for (std::size_t x = 0; x < m; ++x) {
                        PointSet s = 0;
                        forEachMember(S[a][x], [&](std::size_t y) { s |= bit(pp[y]); });
                        code[wp[a] * (2 + m) + 2 + pp[x]] = s;
                      }
                    }
                    if (best.empty() || code < best) best = code;
                  } while (std::next_permutation(pp.begin() + 1, pp.end()));
                } while (std::next_permutation(wp.begin() + 1, wp.end()));
                classes.insert(best);
                return;
              }
              auto [a, x] = slots[k];
              if (kind == FrameKind::MIPC) {
                S[a][x] = dom[a];
                selfS(selfS, k + 1);
                return;
              }
              for (PointSet s = dom[a];; s = (s - 1) & dom[a]) {
                S[a][x] = s;
                selfS(selfS, k + 1);
                if (s == 0) break;
              }
              S[a][x] = 0;
            };
            pickS(pickS, 0);
            return;
          }
          for (PointSet d = 1; d <= fullMask(m); ++d) {
            dom[w] = d;
            self(self, w + 1);
          }
        };
        pickDomains(pickDomains, 0);
      }
      total += classes.size();
    }
  return total;
}

std::size_t countModels(const SearchBudget& b, FrameKind kind) {
  std::size_t n = 0;
  enumerateModels(b, kind, [&](const FiniteModel& m) {
    EXPECT_TRUE(validateModel(m).empty());
    ++n;
    return true;
  });
  return n;
}

} // namespace

TEST(Search, SmallestBudgetCounts) {
  EXPECT_EQ(countModels(budget(1, 1, 0), FrameKind::FS), 2u);
  EXPECT_EQ(countModels(budget(1, 1, 0), FrameKind::MIPC), 1u);
}

TEST(Search, FrameCountsMatchBruteForce) {
  for (auto [w, p] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 2}, std::pair{1, 3}})
    for (FrameKind kind : {FrameKind::FS, FrameKind::MIPC})
      EXPECT_EQ(countModels(budget(w, p, 0), kind), bruteForceFrameClasses(w, p, kind))
          << w << ' ' << p << ' ' << toString(kind);
}

TEST(Search, ValuationsAreAllUpsets) {
  std::size_t frames = 0, expected = 0;
  enumerateModels(budget(2, 2, 0), FrameKind::FS, [&](const FiniteModel& m) {
    ++frames;
    expected += upwardClosedValuations(m, 1 << 20).size();
    return true;
  });
  EXPECT_EQ(countModels(budget(2, 2, 1), FrameKind::FS), expected);
}

TEST(Search, RefutesAndCertifies) {
  for (const char* text : {"<>p1 -> []p1", "((p1 -> p2) -> p1) -> p1", "p1 | (p1 -> false)", "[]<>p1 -> <>[]p1"})
    for (FrameKind kind : {FrameKind::FS, FrameKind::MIPC}) {
      Formula f = parseFormula(text);
      RefutationResult r = findCountermodel(f, budget(3, 3, 2), kind);
      ASSERT_TRUE(r.refuted()) << text << ' ' << toString(kind);
      const Countermodel& cm = *r.countermodel;
      EXPECT_TRUE(validateModel(cm.model).empty());
      EXPECT_EQ(cm.model.kind, kind);
      EXPECT_FALSE(evalDirect(cm.model, cm.world, cm.point, f));
      EXPECT_TRUE(r.stats.complete);
    }
}

TEST(Search, ExhaustsOnValidFormulas) {
  for (const char* text : {"p1 -> p1", "<>(p1 | p2) -> <>p1 | <>p2", "(<>p1 -> []p2) -> [](p1 -> p2)"}) {
    RefutationResult r = findCountermodel(parseFormula(text), budget(2, 2, 2), FrameKind::FS);
    EXPECT_FALSE(r.refuted()) << text;
    EXPECT_TRUE(r.stats.complete);
    EXPECT_GT(r.stats.frames, 0u);
  }
}

TEST(Search, FirstHitIsFirstInEnumerationOrder) {
  Rng rng(21);
  RandomFormulaOptions opt;
  opt.vars = 2;
  int refuted = 0;
  for (int n = 0; n < 150; ++n) {
    Formula f = randomFormula(rng, opt, 3 + n % 9);
    FrameKind kind = n % 2 ? FrameKind::MIPC : FrameKind::FS;
    SearchBudget b = budget(2, 2, 2);
    std::optional<std::pair<std::string, Cell>> first;
    enumerateModels(b, kind, [&](const FiniteModel& m) {
      if (auto c = ModelChecker(m).firstFailure(f)) {
        first = {modelToString(m), *c};
        return false;
      }
      return true;
    });
    RefutationResult r = findCountermodel(f, b, kind);
    ASSERT_EQ(r.refuted(), first.has_value()) << f;
    if (!first) continue;
    ++refuted;
    // the certificate carries only variables the formula uses
    FiniteModel cm = r.countermodel->model;
    FiniteModel ref = parseModel(first->first);
    for (VarIndex p = 1; p <= 2; ++p)
      if (!varset(f).count(p)) ref.valuation.erase(p), cm.valuation.erase(p);
    EXPECT_EQ(modelToString(cm), modelToString(ref)) << f;
    EXPECT_EQ(r.countermodel->world, first->second.world);
    EXPECT_EQ(r.countermodel->point, first->second.point);
  }
  EXPECT_GT(refuted, 20);
}

TEST(Search, DeterministicAcrossThreads) {
  Rng rng(5);
  RandomFormulaOptions opt;
  opt.vars = 2;
  for (int n = 0; n < 40; ++n) {
    Formula f = randomFormula(rng, opt, 4 + n % 10);
    SearchBudget one = budget(3, 2, 2), many = one;
    many.threads = 3;
    RefutationResult a = findCountermodel(f, one, FrameKind::FS);
    RefutationResult b = findCountermodel(f, many, FrameKind::FS);
    ASSERT_EQ(a.refuted(), b.refuted());
    if (a.refuted()) {
      EXPECT_EQ(modelToString(a.countermodel->model), modelToString(b.countermodel->model));
      EXPECT_EQ(a.countermodel->world, b.countermodel->world);
      EXPECT_EQ(a.countermodel->point, b.countermodel->point);
    }
  }
}

TEST(Search, BudgetMonotonicityAndMipcInclusion) {
  Rng rng(6);
  RandomFormulaOptions opt;
  opt.vars = 2;
  for (int n = 0; n < 80; ++n) {
    Formula f = randomFormula(rng, opt, 3 + n % 10);
    bool small = findCountermodel(f, budget(1, 2, 2), FrameKind::FS).refuted();
    bool large = findCountermodel(f, budget(2, 2, 2), FrameKind::FS).refuted();
    if (small) {
      EXPECT_TRUE(large) << f;
    }
    RefutationResult mipc = findCountermodel(f, budget(2, 2, 2), FrameKind::MIPC);
    if (mipc.refuted()) {
      FiniteModel asFs = mipc.countermodel->model;
      asFs.kind = FrameKind::FS;
      EXPECT_TRUE(validateModel(asFs).empty());
      EXPECT_FALSE(evalDirect(asFs, mipc.countermodel->world, mipc.countermodel->point, f));
      EXPECT_TRUE(large) << f;
    }
  }
}

TEST(Search, Caps) {
  SearchBudget b = budget(2, 2, 1);
  b.candidateCap = 1;
  RefutationResult r = findCountermodel(parseFormula("p1 -> p1"), b, FrameKind::FS);
  EXPECT_FALSE(r.refuted());
  EXPECT_FALSE(r.stats.complete);
  EXPECT_EQ(r.stats.stopReason, "candidate cap");
  b.candidateCap.reset();
  b.timeCap = std::chrono::milliseconds(0);
  r = findCountermodel(parseFormula("p1 -> p1"), b, FrameKind::FS);
  EXPECT_EQ(r.stats.stopReason, "time cap");
  EXPECT_THROW(findCountermodel(parseFormula("p3"), budget(1, 1, 2), FrameKind::FS), std::invalid_argument);
  EXPECT_THROW(findCountermodel(parseFormula("p1"), budget(9, 1, 1), FrameKind::FS), std::invalid_argument);
}

TEST(Search, TranslationConsistency) {
  ConsistencyReport id = checkTranslationConsistency(parseFormula("p1 -> p1"), budget(2, 2, 1), budget(1, 2, 1),
                                                     FrameKind::FS);
  EXPECT_FALSE(id.inputResult.refuted());
  EXPECT_FALSE(id.embeddedResult.refuted());
  EXPECT_FALSE(id.starredResult.refuted());
  EXPECT_EQ(id.embeddedVerdict, Consistency::Consistent);
  EXPECT_EQ(id.starredVerdict, Consistency::Consistent);

  ConsistencyReport r = checkTranslationConsistency(parseFormula("<>p1 -> []p1"), budget(2, 2, 1), budget(2, 2, 1),
                                                    FrameKind::FS);
  EXPECT_TRUE(r.inputResult.refuted());
  EXPECT_TRUE(r.embeddedResult.refuted());
  EXPECT_EQ(r.embeddedVerdict, Consistency::Consistent);
  EXPECT_NE(r.starredVerdict, Consistency::Contradiction);
  EXPECT_EQ(r.budgetOut.maxWorlds, 2u);
}

TEST(Search, Classification) {
  RefutationResult yes, no;
  yes.countermodel = Countermodel{FiniteModel::blank(1, 1), 0, 0};
  EXPECT_EQ(classify(yes, yes), Consistency::Consistent);
  EXPECT_EQ(classify(yes, no), Consistency::SoftMiss);
  EXPECT_EQ(classify(no, yes), Consistency::Contradiction);
  EXPECT_EQ(classify(no, no), Consistency::Consistent);
}
