// imred/eval.hpp :: truth relation on finite models
//
//   w,x |= p        iff x in V(w,p)
//   w,x |= false    never
//   w,x |= a & b, a | b   pointwise
//   w,x |= a -> b   iff for all v in R(w): v,x |= a implies v,x |= b
//   w,x |= <>a      iff w,y |= a for some y in S_w(x)
//   w,x |= []a      iff v,y |= a for all v in R(w) and y in S_v(x)
//
// ModelChecker computes, once per distinct subformula, the set of points of
// every world where it holds.  evalDirect applies the clauses literally at a
// single (w, x) with no caching and serves as the reference.

#ifndef IMRED_EVAL_HPP
#define IMRED_EVAL_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "model.hpp"

namespace imred {

class ModelChecker {
public:
  // Validates the model; throws ModelError when it is not an FS-model.
  explicit ModelChecker(const FiniteModel& model) : m_(model) { requireValid(m_); }

  // truth[w] = { x in Delta_w : w, x |= phi }
  const std::vector<PointSet>& truthSets(const Formula& phi) {
    if (auto it = memo_.find(phi.id()); it != memo_.end()) return it->second.second;
    forEachSubformula(phi, [&](const Formula& g) {
      if (!memo_.count(g.id())) memo_.emplace(g.id(), std::make_pair(g, compute(g)));
    });
    return memo_.at(phi.id()).second;
  }

  bool eval(WorldId w, PointId x, const Formula& phi) {
    checkPoint(m_, w, x);
    return contains(truthSets(phi)[w], x);
  }

  bool trueInModel(const Formula& phi) {
    const auto& truth = truthSets(phi);
    for (std::size_t w = 0; w < m_.worldCount(); ++w)
      if ((truth[w] & m_.domain[w]) != m_.domain[w]) return false;
    return true;
  }

  // First (w, x) in world-major order where phi fails, if any.
  std::optional<Cell> firstFailure(const Formula& phi) {
    const auto& truth = truthSets(phi);
    for (std::size_t w = 0; w < m_.worldCount(); ++w) {
      PointSet bad = m_.domain[w] & ~truth[w];
      if (bad) return Cell{w, static_cast<PointId>(std::countr_zero(bad))};
    }
    return std::nullopt;
  }

  const FiniteModel& model() const { return m_; }

  static void checkPoint(const FiniteModel& m, WorldId w, PointId x) {
    if (w >= m.worldCount()) throw std::out_of_range("no world with id " + std::to_string(w));
    if (x >= m.pointCount() || !contains(m.domain[w], x))
      throw std::out_of_range("point " + std::to_string(x) + " is not in the domain of world " +
                              m.worldNames[w]);
  }

private:
  const std::vector<PointSet>& sets(const Formula& g) const { return memo_.at(g.id()).second; }

  std::vector<PointSet> compute(const Formula& g) const {
    const std::size_t nw = m_.worldCount();
    std::vector<PointSet> out(nw, 0);
    switch (g.kind()) {
      case Connective::Var:
        for (std::size_t w = 0; w < nw; ++w) out[w] = m_.truthSet(g.varIndex(), w) & m_.domain[w];
        break;
      case Connective::Bottom:
        break;
      case Connective::And: {
        const auto &a = sets(g.left()), &b = sets(g.right());
        for (std::size_t w = 0; w < nw; ++w) out[w] = a[w] & b[w];
        break;
      }
      case Connective::Or: {
        const auto &a = sets(g.left()), &b = sets(g.right());
        for (std::size_t w = 0; w < nw; ++w) out[w] = a[w] | b[w];
        break;
      }
      case Connective::Implies: {
        const auto &a = sets(g.left()), &b = sets(g.right());
        for (std::size_t w = 0; w < nw; ++w) {
          PointSet ok = m_.domain[w];
          forEachMember(m_.above[w], [&](std::size_t v) { ok &= ~a[v] | b[v]; });
          out[w] = ok;
        }
        break;
      }
      case Connective::Diamond: {
        const auto& a = sets(g.child());
        for (std::size_t w = 0; w < nw; ++w)
          forEachMember(m_.domain[w], [&](std::size_t x) {
            if (m_.access[w][x] & a[w]) out[w] |= bit(x);
          });
        break;
      }
      case Connective::Box: {
        const auto& a = sets(g.child());
        for (std::size_t w = 0; w < nw; ++w)
          forEachMember(m_.domain[w], [&](std::size_t x) {
            bool all = true;
            forEachMember(m_.above[w], [&](std::size_t v) {
              if (m_.access[v][x] & ~a[v]) all = false;
            });
            if (all) out[w] |= bit(x);
          });
        break;
      }
    }
    return out;
  }

  FiniteModel m_;
  std::unordered_map<const void*, std::pair<Formula, std::vector<PointSet>>> memo_;
};

// Clause-by-clause evaluation at one point, no caching.  Cost grows with the
// expanded tree, so keep it to small formulas.
inline bool evalDirect(const FiniteModel& m, WorldId w, PointId x, const Formula& phi) {
  switch (phi.kind()) {
    case Connective::Var:
      return contains(m.truthSet(phi.varIndex(), w), x);
    case Connective::Bottom:
      return false;
    case Connective::And:
      return evalDirect(m, w, x, phi.left()) && evalDirect(m, w, x, phi.right());
    case Connective::Or:
      return evalDirect(m, w, x, phi.left()) || evalDirect(m, w, x, phi.right());
    case Connective::Implies:
      for (std::size_t v = 0; v < m.worldCount(); ++v)
        if (contains(m.above[w], v) && evalDirect(m, v, x, phi.left()) && !evalDirect(m, v, x, phi.right()))
          return false;
      return true;
    case Connective::Diamond:
      for (std::size_t y = 0; y < m.pointCount(); ++y)
        if (contains(m.access[w][x], y) && evalDirect(m, w, y, phi.child())) return true;
      return false;
    case Connective::Box:
      for (std::size_t v = 0; v < m.worldCount(); ++v)
        if (contains(m.above[w], v))
          for (std::size_t y = 0; y < m.pointCount(); ++y)
            if (contains(m.access[v][x], y) && !evalDirect(m, v, y, phi.child())) return false;
      return true;
  }
  return false;
}

inline bool eval(const FiniteModel& m, WorldId w, PointId x, const Formula& phi) {
  return ModelChecker(m).eval(w, x, phi);
}

inline bool trueInModel(const FiniteModel& m, const Formula& phi) { return ModelChecker(m).trueInModel(phi); }

// Validity on the frame underlying `frame` (its valuation is ignored): phi
// must hold under every upward-closed valuation of p1..p_varBound.
inline bool validOnFrame(const FiniteModel& frame, const Formula& phi, VarIndex varBound,
                         std::uint64_t valuationBudget = std::uint64_t{1} << 22) {
  if (phi.maxVar() > varBound) throw std::invalid_argument("formula uses variables beyond the bound");
  FiniteModel m = frame;
  m.valuation.clear();
  requireValid(m);
  const auto choices = upwardClosedValuations(m, valuationBudget);

  std::uint64_t total = 1;
  for (VarIndex p = 0; p < varBound; ++p) {
    if (total > valuationBudget / choices.size())
      throw std::length_error("valuation count exceeds budget");
    total *= choices.size();
  }

  std::vector<std::size_t> digits(varBound, 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    for (VarIndex p = 1; p <= varBound; ++p) m.valuation[p] = choices[digits[p - 1]];
    ModelChecker checker(m);
    if (!checker.trueInModel(phi)) return false;
    // odometer, p1 most significant
    for (std::size_t d = varBound; d-- > 0;) {
      if (++digits[d] < choices.size()) break;
      digits[d] = 0;
    }
  }
  return true;
}

} // namespace imred

#endif
