// imred/random.hpp :: seeded generators for formulas and models

#ifndef IMRED_RANDOM_HPP
#define IMRED_RANDOM_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "formula.hpp"
#include "model.hpp"

namespace imred {

using Rng = std::mt19937_64;

struct RandomFormulaOptions {
  VarIndex vars = 3;          // variables drawn from p1..p_vars
  // Relative weights; leaves split var : false, inner nodes by connective.
  double weightVar = 6, weightBottom = 1;
  double weightAnd = 2, weightOr = 2, weightImplies = 3, weightDiamond = 1.5, weightBox = 1.5;
};

namespace detail {
  inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  }
} // namespace detail

// A random formula with exactly `nodes` AST nodes.
inline Formula randomFormula(Rng& rng, const RandomFormulaOptions& opt, std::size_t nodes) {
  if (nodes == 0) throw std::invalid_argument("formula needs at least one node");
  if (opt.vars == 0) throw std::invalid_argument("at least one variable is required");
  if (nodes == 1) {
    std::discrete_distribution<int> leaf({opt.weightVar, opt.weightBottom});
    if (leaf(rng) == 1) return bottom();
    return var(static_cast<VarIndex>(detail::uniform(rng, 1, opt.vars)));
  }
  std::array<double, 5> w{opt.weightAnd, opt.weightOr, opt.weightImplies, opt.weightDiamond, opt.weightBox};
  if (nodes == 2) w[0] = w[1] = w[2] = 0;   // a binary node needs three
  std::discrete_distribution<int> pick(w.begin(), w.end());
  switch (pick(rng)) {
    case 3: return diamond(randomFormula(rng, opt, nodes - 1));
    case 4: return box(randomFormula(rng, opt, nodes - 1));
    default: break;
  }
  const Connective kinds[] = {Connective::And, Connective::Or, Connective::Implies};
  const Connective kind = kinds[std::discrete_distribution<int>({w[0], w[1], w[2]})(rng)];
  const std::size_t left = detail::uniform(rng, 1, nodes - 2);
  Formula l = randomFormula(rng, opt, left);
  Formula r = randomFormula(rng, opt, nodes - 1 - left);
  return Formula::make(kind, l, r);
}

// A random formula whose length is close to (and at most) `targetLength`.
inline Formula randomFormulaOfLength(Rng& rng, const RandomFormulaOptions& opt, std::uint64_t targetLength) {
  std::size_t nodes = std::max<std::uint64_t>(1, targetLength * 2 / 3);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Formula f = randomFormula(rng, opt, nodes);
    if (f.length() <= targetLength && (f.length() * 10 >= targetLength * 9 || nodes == 1)) return f;
    double ratio = static_cast<double>(f.length()) / static_cast<double>(nodes);
    std::size_t next = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(targetLength) / ratio));
    if (f.length() > targetLength && next >= nodes) next = nodes - 1;
    nodes = std::max<std::size_t>(1, next);
  }
  throw std::runtime_error("could not hit the requested formula length");
}

struct CorpusOptions {
  std::size_t count = 200;
  std::uint64_t minLength = 10;     // target lengths are uniform in [minLength, maxLength]
  std::uint64_t maxLength = 1000;
  RandomFormulaOptions formula;
};

// Deterministic in (seed, options).
inline std::vector<Formula> randomCorpus(std::uint64_t seed, const CorpusOptions& opt) {
  if (opt.minLength < 2 || opt.minLength > opt.maxLength) throw std::invalid_argument("bad corpus length range");
  Rng rng(seed);
  std::vector<Formula> out;
  out.reserve(opt.count);
  for (std::size_t i = 0; i < opt.count; ++i)
    out.push_back(randomFormulaOfLength(rng, opt.formula, detail::uniform(rng, opt.minLength, opt.maxLength)));
  return out;
}

struct RandomModelOptions {
  std::size_t maxWorlds = 4;
  std::size_t maxPoints = 3;
  VarIndex vars = 2;
  FrameKind kind = FrameKind::FS;
  double density = 0.4;       // probability of each optional pair/member
};

// A random valid model.  Worlds are numbered compatibly with R.
inline FiniteModel randomModel(Rng& rng, const RandomModelOptions& opt) {
  if (opt.maxWorlds == 0 || opt.maxWorlds > kMaxWorlds || opt.maxPoints == 0 || opt.maxPoints > kMaxPoints)
    throw std::invalid_argument("model size out of range");
  std::bernoulli_distribution coin(opt.density);
  const std::size_t n = detail::uniform(rng, 1, opt.maxWorlds);
  const std::size_t m = detail::uniform(rng, 1, opt.maxPoints);
  FiniteModel model = FiniteModel::blank(n, m, opt.kind);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) model.above[i] |= bit(j);
  model.closeOrder();

  auto predecessorsUnion = [&](std::size_t w, auto get) {
    std::uint64_t acc = 0;
    for (std::size_t u = 0; u < w; ++u)
      if (contains(model.above[u], w)) acc |= get(u);
    return acc;
  };
  for (std::size_t w = 0; w < n; ++w) {
    PointSet d = predecessorsUnion(w, [&](std::size_t u) { return model.domain[u]; });
    for (std::size_t x = 0; x < m; ++x)
      if (coin(rng)) d |= bit(x);
    if (d == 0) d = bit(detail::uniform(rng, 0, m - 1));
    model.domain[w] = d;
  }
  // every point lives somewhere; world n-1 has no proper successor
  PointSet used = 0;
  for (PointSet d : model.domain) used |= d;
  model.domain[n - 1] |= fullMask(m) & ~used;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t x = 0; x < m; ++x) {
      if (!contains(model.domain[w], x)) continue;
      PointSet s = predecessorsUnion(w, [&](std::size_t u) { return model.access[u][x]; });
      if (opt.kind == FrameKind::MIPC) s = model.domain[w];
      else
        forEachMember(model.domain[w], [&](std::size_t y) {
          if (coin(rng)) s |= bit(y);
        });
      model.access[w][x] = s;
    }
  }
  for (VarIndex p = 1; p <= opt.vars; ++p) {
    auto& sets = model.valuation[p];
    sets.assign(n, 0);
    for (std::size_t w = 0; w < n; ++w) {
      PointSet v = 0;
      for (std::size_t u = 0; u < w; ++u)
        if (contains(model.above[u], w)) v |= sets[u];
      forEachMember(model.domain[w], [&](std::size_t x) {
        if (coin(rng)) v |= bit(x);
      });
      sets[w] = v;
    }
  }
  return model;
}

} // namespace imred

#endif
