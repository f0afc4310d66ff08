// imred/reduction.hpp :: embedding into the positive one-variable fragment
//
// Two stages.  positiveEmbed removes falsum: with f the least variable not in
// phi and m = md(phi),
//
//   F1 = (f | <>f | ... | <>^m f) -> f
//   F2 = f -> (f & []f & ... & []^m f)
//   F3 = /\_{p in var phi} (f->p) & [](f->p) & ... & []^m(f->p)
//   e(phi) = F1 & F2 & F3 -> [f/false] phi
//
// star then maps a positive formula over p_1..p_s to a formula over p1 alone by
// substituting A^K_r | B^K_r for p_r, where K = k_phi + k0 and k_phi is the
// least k with |phi| < l_0 * 5^k.

#ifndef IMRED_REDUCTION_HPP
#define IMRED_REDUCTION_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "family.hpp"
#include "formula.hpp"

namespace imred {

struct PositiveEmbedding {
  VarIndex fresh = 0;
  Formula f1 = bottom();
  Formula f2 = bottom();
  Formula f3 = bottom();
  Formula guard = bottom();      // F = F1 & F2 & F3
  Formula replaced = bottom();   // [f/false] phi
  Formula embedded = bottom();   // F -> [f/false] phi
};

inline VarIndex leastUnusedVar(const Formula& phi) {
  VarSet used = varset(phi);
  VarIndex candidate = 1;
  for (VarIndex v : used) {
    if (v != candidate) break;
    ++candidate;
  }
  return candidate;
}

inline PositiveEmbedding positiveEmbed(const Formula& phi) {
  PositiveEmbedding out;
  const std::size_t m = phi.mdepth();
  const VarSet vars = varset(phi);
  out.fresh = leastUnusedVar(phi);
  const Formula f = var(out.fresh);

  out.f1 = implies(diamondChain(m, f), f);
  out.f2 = implies(f, boxChain(m, f));
  if (vars.empty()) {
    out.f3 = implies(f, f);
  } else {
    std::vector<Formula> parts;
    for (VarIndex p : vars) parts.push_back(boxChain(m, implies(f, var(p))));
    out.f3 = conjAll(parts);
  }
  out.guard = conjAll({out.f1, out.f2, out.f3});
  out.replaced = replaceBottom(phi, f);
  out.embedded = implies(out.guard, out.replaced);
  return out;
}

// Least k with length(phi) < l_0 * 5^k.
inline std::size_t targetLevel(const Formula& phi) {
  const BigNat len = phi.length();
  BigNat bound = baseLength();
  std::size_t k = 0;
  while (!(len < bound)) {
    bound *= 5;
    ++k;
  }
  return k;
}

struct StarResult {
  Formula formula = bottom();
  std::size_t level = 0;                              // k_phi + k0
  std::vector<std::pair<VarIndex, VarIndex>> renaming;  // original -> dense index r
};

inline StarResult starDetailed(const Formula& phi) {
  if (!phi.isPositive()) throw std::invalid_argument("star: input contains 'false'");
  StarResult out;
  out.level = targetLevel(phi) + stabilityLevel();
  const VarSet vars = varset(phi);
  if (BigNat(vars.size()) >= levelCount(out.level))
    throw std::logic_error("star: level " + std::to_string(out.level) + " has too few family members");

  FamilyBuilder family(1);
  std::map<VarIndex, Formula> bindings;
  VarIndex r = 0;
  for (VarIndex p : vars) {
    ++r;
    out.renaming.emplace_back(p, r);
    bindings.emplace(p, disj(family.a(out.level, r), family.b(out.level, r)));
  }
  out.formula = substitute(phi, bindings);
  return out;
}

inline Formula star(const Formula& phi) { return starDetailed(phi).formula; }

struct TranslationReport {
  Formula input = bottom();
  PositiveEmbedding positive;
  std::uint64_t baseLength = 0;   // l_0
  std::size_t stabilityLevel = 0; // k0
  std::size_t targetLevel = 0;    // k_phi, computed for e(phi)
  StarResult starred;
  BigNat sizeBound;               // 2 * 5^{k0+1} * |e(phi)|^2
  bool boundOk = false;           // |output| < sizeBound

  const Formula& output() const { return starred.formula; }
};

inline BigNat quadraticSizeBound(std::uint64_t inputLength) {
  BigNat len = inputLength;
  return 2 * pow5(stabilityLevel() + 1) * len * len;
}

inline TranslationReport reduceToOneVar(const Formula& phi) {
  TranslationReport report;
  report.input = phi;
  report.positive = positiveEmbed(phi);
  report.baseLength = baseLength();
  report.stabilityLevel = stabilityLevel();
  report.targetLevel = targetLevel(report.positive.embedded);
  report.starred = starDetailed(report.positive.embedded);
  report.sizeBound = quadraticSizeBound(report.positive.embedded.length());
  report.boundOk = BigNat(report.starred.formula.length()) < report.sizeBound;
  return report;
}

} // namespace imred

#endif
