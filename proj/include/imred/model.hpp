// imred/model.hpp :: finite FS- and MIPC-models
//
// Worlds and points are dense ids.  A point id denotes the same individual in
// every world whose domain contains it, so Delta_w subset Delta_v is literal
// set inclusion.  Per-world sets are 64-bit masks, which caps a model at 64
// worlds and 64 points.

#ifndef IMRED_MODEL_HPP
#define IMRED_MODEL_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "formula.hpp"

namespace imred {

using WorldId = std::size_t;
using PointId = std::size_t;
using WorldSet = std::uint64_t;
using PointSet = std::uint64_t;

inline constexpr std::size_t kMaxWorlds = 64;
inline constexpr std::size_t kMaxPoints = 64;

enum class FrameKind : std::uint8_t { FS, MIPC };

inline const char* toString(FrameKind k) { return k == FrameKind::FS ? "fs" : "mipc"; }

inline constexpr std::uint64_t bit(std::size_t i) noexcept { return std::uint64_t{1} << i; }
inline constexpr bool contains(std::uint64_t set, std::size_t i) noexcept { return (set >> i) & 1u; }
inline constexpr std::uint64_t fullMask(std::size_t n) noexcept { return n >= 64 ? ~std::uint64_t{0} : bit(n) - 1; }

// Calls fn(i) for every member of `set`, ascending.
template <class Fn>
inline void forEachMember(std::uint64_t set, Fn&& fn) {
  while (set) {
    fn(static_cast<std::size_t>(std::countr_zero(set)));
    set &= set - 1;
  }
}

struct FiniteModel {
  FrameKind kind = FrameKind::FS;
  std::vector<std::string> worldNames;
  std::vector<std::string> pointNames;
  std::vector<WorldSet> above;                    // R(w), reflexive and transitive
  std::vector<PointSet> domain;                   // Delta_w
  std::vector<std::vector<PointSet>> access;      // S_w(x) as [w][x]
  std::map<VarIndex, std::vector<PointSet>> valuation;   // V(w, p) as [p][w]

  std::size_t worldCount() const { return worldNames.size(); }
  std::size_t pointCount() const { return pointNames.size(); }

  PointSet truthSet(VarIndex p, WorldId w) const {
    auto it = valuation.find(p);
    return it == valuation.end() ? 0 : it->second[w];
  }

  // Blank model with `worlds` discrete worlds and `points` named points.
  static FiniteModel blank(std::size_t worlds, std::size_t points, FrameKind kind = FrameKind::FS) {
    FiniteModel m;
    m.kind = kind;
    for (std::size_t w = 0; w < worlds; ++w) m.worldNames.push_back("w" + std::to_string(w));
    for (std::size_t x = 0; x < points; ++x) m.pointNames.push_back("a" + std::to_string(x));
    m.above.resize(worlds);
    for (std::size_t w = 0; w < worlds; ++w) m.above[w] = bit(w);
    m.domain.assign(worlds, 0);
    m.access.assign(worlds, std::vector<PointSet>(points, 0));
    return m;
  }

  void setTrue(VarIndex p, WorldId w, PointId x) {
    auto& sets = valuation[p];
    sets.resize(worldCount(), 0);
    sets[w] |= bit(x);
  }

  // Replaces `above` by its reflexive-transitive closure.
  void closeOrder() {
    const std::size_t n = worldCount();
    for (std::size_t w = 0; w < n; ++w) above[w] |= bit(w);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t w = 0; w < n; ++w)
        if (contains(above[w], k)) above[w] |= above[k];
  }

  // Makes every S_w total on Delta_w.
  void makeTotal() {
    for (std::size_t w = 0; w < worldCount(); ++w)
      forEachMember(domain[w], [&](std::size_t x) { access[w][x] = domain[w]; });
  }
};

struct Violation {
  std::string condition;
  std::string witness;
};

inline std::string describe(const Violation& v) { return v.condition + ": " + v.witness; }

inline std::vector<Violation> validateModel(const FiniteModel& m) {
  std::vector<Violation> out;
  const std::size_t nw = m.worldCount(), np = m.pointCount();
  auto wn = [&](std::size_t w) { return m.worldNames[w]; };
  auto pn = [&](std::size_t x) { return m.pointNames[x]; };

  if (nw == 0) {
    out.push_back({"nonempty world set", "model has no worlds"});
    return out;
  }
  if (nw > kMaxWorlds || np > kMaxPoints) {
    out.push_back({"capacity", "at most 64 worlds and 64 points are supported"});
    return out;
  }
  if (m.above.size() != nw || m.domain.size() != nw || m.access.size() != nw) {
    out.push_back({"shape", "per-world tables do not match the world count"});
    return out;
  }
  for (const auto& row : m.access)
    if (row.size() != np) {
      out.push_back({"shape", "access table does not match the point count"});
      return out;
    }
  for (const auto& [p, sets] : m.valuation)
    if (sets.size() != nw) {
      out.push_back({"shape", "valuation of p" + std::to_string(p) + " does not match the world count"});
      return out;
    }

  const WorldSet worldsMask = fullMask(nw);
  const PointSet pointsMask = fullMask(np);
  for (std::size_t w = 0; w < nw; ++w) {
    if (!contains(m.above[w], w)) out.push_back({"R reflexivity", wn(w)});
    if (m.above[w] & ~worldsMask) out.push_back({"shape", "R relates " + wn(w) + " to an unknown world"});
    forEachMember(m.above[w] & worldsMask, [&](std::size_t v) {
      if (v != w && contains(m.above[v], w)) {
        if (w < v) out.push_back({"R antisymmetry", wn(w) + " <= " + wn(v) + " <= " + wn(w)});
      }
      if ((m.above[v] & ~m.above[w]) != 0) {
        std::size_t u = static_cast<std::size_t>(std::countr_zero(m.above[v] & ~m.above[w]));
        out.push_back({"R transitivity", wn(w) + " <= " + wn(v) + " <= " + (u < nw ? wn(u) : "?")});
      }
    });
  }

  for (std::size_t w = 0; w < nw; ++w) {
    if ((m.domain[w] & pointsMask) == 0) out.push_back({"nonempty point set", wn(w)});
    if (m.domain[w] & ~pointsMask) out.push_back({"shape", "domain of " + wn(w) + " names an unknown point"});
    for (std::size_t x = 0; x < np; ++x) {
      PointSet succ = m.access[w][x];
      if (succ == 0) continue;
      if (!contains(m.domain[w], x) || (succ & ~m.domain[w]) != 0) {
        std::size_t y = contains(m.domain[w], x) ? static_cast<std::size_t>(std::countr_zero(succ & ~m.domain[w]))
                                                 : static_cast<std::size_t>(std::countr_zero(succ));
        out.push_back({"relation within points", "(" + pn(x) + "," + (y < np ? pn(y) : "?") + ") in S of " + wn(w)});
      }
    }
    if (m.kind == FrameKind::MIPC) {
      forEachMember(m.domain[w] & pointsMask, [&](std::size_t x) {
        if ((m.access[w][x] & m.domain[w]) != m.domain[w]) {
          std::size_t y = static_cast<std::size_t>(std::countr_zero(m.domain[w] & ~m.access[w][x]));
          out.push_back({"MIPC totality", "(" + pn(x) + "," + pn(y) + ") missing from S of " + wn(w)});
        }
      });
    }
    for (const auto& [p, sets] : m.valuation) {
      if (sets[w] & ~m.domain[w]) {
        std::size_t x = static_cast<std::size_t>(std::countr_zero(sets[w] & ~m.domain[w]));
        out.push_back({"valuation within points",
                       "p" + std::to_string(p) + " holds at " + (x < np ? pn(x) : "?") + " outside " + wn(w)});
      }
    }
  }

  for (std::size_t w = 0; w < nw; ++w) {
    forEachMember(m.above[w] & worldsMask & ~bit(w), [&](std::size_t v) {
      if (m.domain[w] & ~m.domain[v]) {
        std::size_t x = static_cast<std::size_t>(std::countr_zero(m.domain[w] & ~m.domain[v]));
        out.push_back({"point-set monotonicity", wn(w) + " <= " + wn(v) + ", " + (x < np ? pn(x) : "?") +
                                                     " missing in " + wn(v)});
      }
      for (std::size_t x = 0; x < np; ++x) {
        if (m.access[w][x] & ~m.access[v][x]) {
          std::size_t y = static_cast<std::size_t>(std::countr_zero(m.access[w][x] & ~m.access[v][x]));
          out.push_back({"relation monotonicity", wn(w) + " <= " + wn(v) + ", (" + pn(x) + "," +
                                                      (y < np ? pn(y) : "?") + ") missing in " + wn(v)});
        }
      }
      for (const auto& [p, sets] : m.valuation) {
        if (sets[w] & ~sets[v]) {
          std::size_t x = static_cast<std::size_t>(std::countr_zero(sets[w] & ~sets[v]));
          out.push_back({"valuation monotonicity", "p" + std::to_string(p) + " at " + (x < np ? pn(x) : "?") +
                                                       ": true in " + wn(w) + " but not in " + wn(v)});
        }
      }
    });
  }
  return out;
}

class ModelError : public std::runtime_error {
public:
  explicit ModelError(std::vector<Violation> violations)
      : std::runtime_error(summary(violations)), violations_(std::move(violations)) {}
  explicit ModelError(const std::string& message) : std::runtime_error(message) {}
  const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
  static std::string summary(const std::vector<Violation>& vs) {
    std::string s = "invalid model";
    for (const auto& v : vs) s += "\n  " + describe(v);
    return s;
  }
  std::vector<Violation> violations_;
};

inline void requireValid(const FiniteModel& m) {
  auto violations = validateModel(m);
  if (!violations.empty()) throw ModelError(std::move(violations));
}

// The cells (w, x), x in Delta_w, in world-major order.
struct Cell {
  WorldId world;
  PointId point;
};

inline std::vector<Cell> cellsOf(const FiniteModel& m) {
  std::vector<Cell> cells;
  for (std::size_t w = 0; w < m.worldCount(); ++w)
    forEachMember(m.domain[w], [&](std::size_t x) { cells.push_back({w, x}); });
  return cells;
}

// All admissible valuations of one variable: subsets of the cells closed
// upwards along R (x in V(w) and w R v imply x in V(v)), as [w] masks.
// Lexicographic in cell order with "absent" before "present", so the empty
// valuation comes first.  Worlds must be numbered compatibly with R
// (w R v implies w <= v) for the early-forcing to be exact; otherwise the
// final closure filter still discards non-monotone candidates.
inline std::vector<std::vector<PointSet>> upwardClosedValuations(const FiniteModel& m, std::size_t limit) {
  const std::vector<Cell> cells = cellsOf(m);
  std::vector<std::vector<PointSet>> out;
  std::vector<PointSet> current(m.worldCount(), 0);

  auto closed = [&]() {
    for (std::size_t w = 0; w < m.worldCount(); ++w)
      for (std::size_t v = 0; v < m.worldCount(); ++v)
        if (contains(m.above[w], v) && (current[w] & ~current[v])) return false;
    return true;
  };
  auto forced = [&](const Cell& c) {
    for (std::size_t u = 0; u < m.worldCount(); ++u)
      if (u != c.world && contains(m.above[u], c.world) && contains(current[u], c.point)) return true;
    return false;
  };
  auto go = [&](auto&& self, std::size_t i) -> void {
    if (i == cells.size()) {
      if (closed()) {
        if (out.size() >= limit) throw std::length_error("valuation count exceeds budget");
        out.push_back(current);
      }
      return;
    }
    const Cell& c = cells[i];
    if (!forced(c)) self(self, i + 1);
    current[c.world] |= bit(c.point);
    self(self, i + 1);
    current[c.world] &= ~bit(c.point);
  };
  go(go, 0);
  return out;
}

} // namespace imred

#endif
