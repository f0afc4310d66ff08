// imred/search.hpp :: bounded countermodel search over finite FS/MIPC-models
//
// The search space for a budget (W worlds, P points, k variables) is the set
// of rooted models:
//
//   * worlds 0..n-1, n <= W, with 0 below every world and R compatible with
//     the numbering (w R v implies w <= v);
//   * points 0..m-1, m <= P, with point 0 in Delta_0 and every point reachable
//     from point 0 along the union of the S_w;
//   * one representative per relabelling of worlds and points that fixes the
//     root world and the root point.
//
// Any countermodel at (w, x) restricts to the submodel generated by world w
// and the points reachable from x, which is again a countermodel of no larger
// size; so the rooted space refutes exactly what the full space refutes.
//
// Models are visited in a fixed order: by n, then m, then lexicographically by
// the order relation, the domains, the accessibility relations and finally
// the valuation (p1 most significant; for each variable the upward-closed
// sets of cells in lexicographic order, empty set first).  The reported
// countermodel is the first one in this order, whatever the thread count.
//
// Valuations are tested bit-parallel: the truth value of every subformula at
// every cell is a word vector indexed by the valuation of the last variable,
// so one pass over the formula settles up to 64 valuations per word.

#ifndef IMRED_SEARCH_HPP
#define IMRED_SEARCH_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "eval.hpp"
#include "formula.hpp"
#include "model.hpp"
#include "reduction.hpp"

namespace imred {

inline constexpr std::size_t kSearchMaxWorlds = 8;
inline constexpr std::size_t kSearchMaxPoints = 8;

struct SearchBudget {
  std::size_t maxWorlds = 1;
  std::size_t maxPoints = 1;
  VarIndex varBound = 1;
  std::optional<std::uint64_t> candidateCap;          // frames
  std::optional<std::chrono::milliseconds> timeCap;
  unsigned threads = 1;

  void validate() const {
    if (maxWorlds < 1 || maxWorlds > kSearchMaxWorlds)
      throw std::invalid_argument("max worlds must be in 1.." + std::to_string(kSearchMaxWorlds));
    if (maxPoints < 1 || maxPoints > kSearchMaxPoints)
      throw std::invalid_argument("max points must be in 1.." + std::to_string(kSearchMaxPoints));
    if (threads < 1) throw std::invalid_argument("thread count must be positive");
    if (candidateCap && *candidateCap == 0) throw std::invalid_argument("candidate cap must be positive");
  }
};

inline std::string describe(const SearchBudget& b) {
  return "worlds=" + std::to_string(b.maxWorlds) + " points=" + std::to_string(b.maxPoints) +
         " vars=" + std::to_string(b.varBound);
}

struct SearchStats {
  std::uint64_t frames = 0;       // frames whose valuations were examined
  std::uint64_t valuations = 0;   // (frame, valuation) pairs examined
  bool complete = true;           // false when a cap stopped the search
  std::string stopReason;         // "candidate cap" or "time cap" when incomplete
  double seconds = 0;
};

struct Countermodel {
  FiniteModel model;
  WorldId world = 0;
  PointId point = 0;
};

// Either a countermodel or, when absent, exhaustion of the budget.  Exhaustion
// is inconclusive: it is not evidence of validity beyond the budget.
struct RefutationResult {
  std::optional<Countermodel> countermodel;
  SearchStats stats;
  bool refuted() const { return countermodel.has_value(); }
};

namespace detail {

  // Search-internal frame; S_w is an 8x8 bit matrix, row x at bits 8x..8x+7.
  struct SearchFrame {
    std::size_t worlds = 0;
    std::size_t points = 0;
    std::uint32_t orderCode = 0;
    std::array<WorldSet, kSearchMaxWorlds> above{};
    std::array<PointSet, kSearchMaxWorlds> domain{};
    std::array<std::uint64_t, kSearchMaxWorlds> access{};

    PointSet successors(std::size_t w, std::size_t x) const { return (access[w] >> (8 * x)) & 0xFFu; }
  };

  inline std::uint64_t squareMatrix(PointSet d) {
    std::uint64_t out = 0;
    forEachMember(d, [&](std::size_t x) { out |= static_cast<std::uint64_t>(d) << (8 * x); });
    return out;
  }

  // Strict pairs (i, j), 1 <= i < j < n, in code-bit order.
  inline std::vector<std::pair<std::size_t, std::size_t>> orderPairs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }

  inline std::array<WorldSet, kSearchMaxWorlds> aboveFromCode(std::size_t n, std::uint32_t code) {
    std::array<WorldSet, kSearchMaxWorlds> above{};
    above[0] = fullMask(n);
    for (std::size_t w = 1; w < n; ++w) above[w] = bit(w);
    auto pairs = orderPairs(n);
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if ((code >> b) & 1u) above[pairs[b].first] |= bit(pairs[b].second);
    return above;
  }

  // Code of `above` if it is a rooted order compatible with the numbering.
  inline std::optional<std::uint32_t> codeFromAbove(std::size_t n, const std::array<WorldSet, kSearchMaxWorlds>& above) {
    if (above[0] != fullMask(n)) return std::nullopt;
    auto pairs = orderPairs(n);
    std::uint32_t code = 0;
    for (std::size_t w = 1; w < n; ++w) {
      if (!contains(above[w], w)) return std::nullopt;
      if (above[w] & fullMask(w + 1) & ~bit(w)) return std::nullopt;  // points downwards
    }
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (contains(above[pairs[b].first], pairs[b].second)) code |= 1u << b;
    return code;
  }

  inline std::vector<std::uint32_t> rootedOrders(std::size_t n) {
    std::vector<std::uint32_t> out;
    const std::size_t bits = orderPairs(n).size();
    for (std::uint32_t code = 0; code < (1u << bits); ++code) {
      auto above = aboveFromCode(n, code);
      bool transitive = true;
      for (std::size_t w = 0; w < n && transitive; ++w)
        forEachMember(above[w], [&](std::size_t v) {
          if (above[v] & ~above[w]) transitive = false;
        });
      if (transitive) out.push_back(code);
    }
    return out;
  }

  inline std::vector<std::vector<std::size_t>> permutationsFixingZero(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin() + (n > 0 ? 1 : 0), p.end()));
    return out;
  }

  inline PointSet permuteSet(PointSet s, const std::vector<std::size_t>& perm) {
    PointSet out = 0;
    forEachMember(s, [&](std::size_t x) { out |= bit(perm[x]); });
    return out;
  }

  class FrameEnumerator {
  public:
    FrameEnumerator(const SearchBudget& budget, FrameKind kind) : budget_(budget), kind_(kind) {}

    // Calls visit(frame) in canonical order until it returns false.
    // Returns false when stopped early.
    bool run(const std::function<bool(const SearchFrame&)>& visit) {
      visit_ = &visit;
      for (std::size_t n = 1; n <= budget_.maxWorlds; ++n) {
        worldPerms_ = permutationsFixingZero(n);
        const auto orders = rootedOrders(n);
        for (std::size_t m = 1; m <= budget_.maxPoints; ++m) {
          pointPerms_ = permutationsFixingZero(m);
          for (std::uint32_t code : orders) {
            frame_ = SearchFrame{};
            frame_.worlds = n;
            frame_.points = m;
            frame_.orderCode = code;
            frame_.above = aboveFromCode(n, code);
            if (!chooseDomain(0)) return false;
          }
        }
      }
      return true;
    }

  private:
    bool chooseDomain(std::size_t w) {
      const std::size_t n = frame_.worlds;
      if (w == n) {
        PointSet all = 0;
        for (std::size_t u = 0; u < n; ++u) all |= frame_.domain[u];
        if (all != fullMask(frame_.points)) return true;
        return chooseAccess(0);
      }
      PointSet lower = w == 0 ? bit(0) : 0;
      for (std::size_t u = 0; u < w; ++u)
        if (contains(frame_.above[u], w)) lower |= frame_.domain[u];
      const PointSet free = fullMask(frame_.points) & ~lower;
      PointSet sub = 0;
      do {
        frame_.domain[w] = lower | sub;
        if (!chooseDomain(w + 1)) return false;
        sub = ((sub | ~free) + 1) & free;
      } while (sub != 0);
      return true;
    }

    bool chooseAccess(std::size_t w) {
      const std::size_t n = frame_.worlds;
      if (w == n) return finish();
      const std::uint64_t allowed = squareMatrix(frame_.domain[w]);
      if (kind_ == FrameKind::MIPC) {
        frame_.access[w] = allowed;
        return chooseAccess(w + 1);
      }
      std::uint64_t lower = 0;
      for (std::size_t u = 0; u < w; ++u)
        if (contains(frame_.above[u], w)) lower |= frame_.access[u];
      const std::uint64_t free = allowed & ~lower;
      std::uint64_t sub = 0;
      do {
        frame_.access[w] = lower | sub;
        if (!chooseAccess(w + 1)) return false;
        sub = ((sub | ~free) + 1) & free;
      } while (sub != 0);
      return true;
    }

    bool finish() {
      if (!reachable() || !canonical()) return true;
      return (*visit_)(frame_);
    }

    bool reachable() const {
      std::uint64_t s = 0;
      for (std::size_t w = 0; w < frame_.worlds; ++w) s |= frame_.access[w];
      PointSet seen = bit(0), todo = bit(0);
      while (todo) {
        std::size_t x = static_cast<std::size_t>(std::countr_zero(todo));
        todo &= todo - 1;
        PointSet next = (s >> (8 * x)) & 0xFFu & ~seen;
        seen |= next;
        todo |= next;
      }
      return seen == fullMask(frame_.points);
    }

    // True when no relabelling fixing the roots yields a smaller frame.
    bool canonical() const {
      const std::size_t n = frame_.worlds, m = frame_.points;
      for (const auto& pw : worldPerms_) {
        std::array<WorldSet, kSearchMaxWorlds> above{};
        for (std::size_t w = 0; w < n; ++w) above[pw[w]] = permuteSet(frame_.above[w], pw);
        auto code = codeFromAbove(n, above);
        if (!code || *code > frame_.orderCode) continue;
        for (const auto& pp : pointPerms_) {
          if (*code == frame_.orderCode && isIdentity(pw) && isIdentity(pp)) continue;
          std::array<PointSet, kSearchMaxWorlds> dom{};
          std::array<std::uint64_t, kSearchMaxWorlds> acc{};
          for (std::size_t w = 0; w < n; ++w) {
            dom[pw[w]] = permuteSet(frame_.domain[w], pp);
            std::uint64_t row = 0;
            for (std::size_t x = 0; x < m; ++x)
              row |= static_cast<std::uint64_t>(permuteSet(frame_.successors(w, x), pp)) << (8 * pp[x]);
            acc[pw[w]] = row;
          }
          if (*code < frame_.orderCode) return false;
          for (std::size_t w = 0; w < n; ++w) {
            if (dom[w] != frame_.domain[w]) {
              if (dom[w] < frame_.domain[w]) return false;
              goto next;
            }
          }
          for (std::size_t w = 0; w < n; ++w) {
            if (acc[w] != frame_.access[w]) {
              if (acc[w] < frame_.access[w]) return false;
              goto next;
            }
          }
        next:;
        }
      }
      return true;
    }

    static bool isIdentity(const std::vector<std::size_t>& p) {
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i) return false;
      return true;
    }

    SearchBudget budget_;
    FrameKind kind_;
    SearchFrame frame_;
    std::vector<std::vector<std::size_t>> worldPerms_;
    std::vector<std::vector<std::size_t>> pointPerms_;
    const std::function<bool(const SearchFrame&)>* visit_ = nullptr;
  };

  // Upward-closed cell sets of a search frame, as per-world masks.
  inline std::vector<std::array<PointSet, kSearchMaxWorlds>> frameUpsets(const SearchFrame& f) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t w = 0; w < f.worlds; ++w) forEachMember(f.domain[w], [&](std::size_t x) { cells.emplace_back(w, x); });
    std::vector<std::array<PointSet, kSearchMaxWorlds>> out;
    std::array<PointSet, kSearchMaxWorlds> cur{};
    auto go = [&](auto&& self, std::size_t i) -> void {
      if (i == cells.size()) {
        out.push_back(cur);
        return;
      }
      auto [w, x] = cells[i];
      bool forced = false;
      for (std::size_t u = 0; u < w; ++u)
        if (contains(f.above[u], w) && contains(cur[u], x)) forced = true;
      if (!forced) self(self, i + 1);
      cur[w] |= bit(x);
      self(self, i + 1);
      cur[w] &= ~bit(x);
    };
    go(go, 0);
    return out;
  }

  inline FiniteModel toModel(const SearchFrame& f, FrameKind kind) {
    FiniteModel m = FiniteModel::blank(f.worlds, f.points, kind);
    for (std::size_t w = 0; w < f.worlds; ++w) {
      m.above[w] = f.above[w];
      m.domain[w] = f.domain[w];
      for (std::size_t x = 0; x < f.points; ++x) m.access[w][x] = f.successors(w, x);
    }
    return m;
  }

  // A formula flattened into a list of distinct subformulas, children first.
  // `outer` marks subformulas that mention a variable other than the last.
  struct CompiledFormula {
    struct Op {
      Connective kind;
      std::uint32_t a = 0, b = 0;   // operand slots
      std::uint32_t var = 0;        // position in `vars` for Var
      bool outer = false;
    };
    std::vector<Op> ops;
    std::vector<VarIndex> vars;     // occurring variables, ascending
    Formula source = bottom();

    explicit CompiledFormula(const Formula& phi) : source(phi) {
      VarSet vs = varset(phi);
      vars.assign(vs.begin(), vs.end());
      std::unordered_map<const void*, std::uint32_t> slot;
      forEachSubformula(phi, [&](const Formula& g) {
        Op op{g.kind()};
        if (g.kind() == Connective::Var) {
          op.var = static_cast<std::uint32_t>(std::lower_bound(vars.begin(), vars.end(), g.varIndex()) - vars.begin());
          op.outer = op.var + 1 < vars.size();
        } else if (isBinary(g.kind())) {
          op.a = slot.at(g.left().id());
          op.b = slot.at(g.right().id());
          op.outer = ops[op.a].outer || ops[op.b].outer;
        } else if (isModal(g.kind())) {
          op.a = slot.at(g.child().id());
          op.outer = ops[op.a].outer;
        }
        slot.emplace(g.id(), static_cast<std::uint32_t>(ops.size()));
        ops.push_back(op);
      });
    }
  };

  struct FrameHit {
    std::vector<std::size_t> digits;   // upset index per occurring variable
    std::size_t world = 0, point = 0;
  };

  // Bit-parallel evaluation of one compiled formula over all valuations of a
  // frame.  Slot u of a word vector is the valuation giving the last variable
  // its u-th upward-closed set; the other variables are iterated outside.
  class SlicedEvaluator {
  public:
    explicit SlicedEvaluator(const CompiledFormula& cf) : cf_(cf) {}

    std::optional<FrameHit> firstFailure(const SearchFrame& f, std::uint64_t& tried) {
      prepare(f);
      switch (words_) {
        case 1: return run<1>(tried);
        case 2: return run<2>(tried);
        case 3: return run<3>(tried);
        case 4: return run<4>(tried);
        default: return run<0>(tried);
      }
    }

  private:
    void prepare(const SearchFrame& f) {
      upsets_ = frameUpsets(f);
      const std::size_t k = cf_.vars.size();
      words_ = k == 0 ? 1 : (upsets_.size() + 63) / 64;
      slots_ = k == 0 ? 1 : upsets_.size();

      cells_.clear();
      std::array<std::uint32_t, kSearchMaxWorlds * kSearchMaxPoints> id{};
      for (std::size_t w = 0; w < f.worlds; ++w)
        forEachMember(f.domain[w], [&](std::size_t x) {
          id[w * kSearchMaxPoints + x] = static_cast<std::uint32_t>(cells_.size());
          cells_.push_back({w, x});
        });
      const std::size_t C = cells_.size();
      upStart_.assign(C + 1, 0);
      diaStart_.assign(C + 1, 0);
      boxStart_.assign(C + 1, 0);
      up_.clear();
      dia_.clear();
      box_.clear();
      for (std::size_t c = 0; c < C; ++c) {
        auto [w, x] = cells_[c];
        forEachMember(f.above[w], [&](std::size_t v) {
          up_.push_back(id[v * kSearchMaxPoints + x]);
          forEachMember(f.successors(v, x), [&](std::size_t y) { box_.push_back(id[v * kSearchMaxPoints + y]); });
        });
        forEachMember(f.successors(w, x), [&](std::size_t y) { dia_.push_back(id[w * kSearchMaxPoints + y]); });
        upStart_[c + 1] = static_cast<std::uint32_t>(up_.size());
        diaStart_[c + 1] = static_cast<std::uint32_t>(dia_.size());
        boxStart_[c + 1] = static_cast<std::uint32_t>(box_.size());
      }

      valid_.assign(words_, 0);
      for (std::size_t u = 0; u < slots_; ++u) valid_[u / 64] |= bit(u % 64);
      sliced_.assign(C * words_, 0);
      if (k > 0)
        for (std::size_t u = 0; u < upsets_.size(); ++u)
          for (std::size_t c = 0; c < C; ++c)
            if (contains(upsets_[u][cells_[c].first], cells_[c].second)) sliced_[c * words_ + u / 64] |= bit(u % 64);
    }

    template <std::size_t WC>
    std::optional<FrameHit> run(std::uint64_t& tried) {
      const std::size_t W = WC ? WC : words_;
      const std::size_t C = cells_.size();
      const std::size_t k = cf_.vars.size();
      const std::size_t U = upsets_.size();
      values_.assign(cf_.ops.size() * C * W, 0);
      std::vector<std::size_t> digits(k == 0 ? 0 : k - 1, 0);
      std::uint64_t outer = 1;
      for (std::size_t i = 0; i + 1 < k; ++i) outer *= U;

      auto val = [&](std::uint32_t op) { return values_.data() + static_cast<std::size_t>(op) * C * W; };
      auto evalOp = [&](std::size_t o) {
        const auto& op = cf_.ops[o];
        std::uint64_t* out = val(static_cast<std::uint32_t>(o));
        switch (op.kind) {
          case Connective::Var:
            if (op.var + 1 == k) {
              std::copy(sliced_.begin(), sliced_.end(), out);
            } else {
              const auto& set = upsets_[digits[op.var]];
              for (std::size_t c = 0; c < C; ++c) {
                std::uint64_t v = contains(set[cells_[c].first], cells_[c].second) ? ~std::uint64_t{0} : 0;
                for (std::size_t i = 0; i < W; ++i) out[c * W + i] = v;
              }
            }
            break;
          case Connective::Bottom:
            std::fill(out, out + C * W, 0);
            break;
          case Connective::And: {
            const std::uint64_t *a = val(op.a), *b = val(op.b);
            for (std::size_t i = 0; i < C * W; ++i) out[i] = a[i] & b[i];
            break;
          }
          case Connective::Or: {
            const std::uint64_t *a = val(op.a), *b = val(op.b);
            for (std::size_t i = 0; i < C * W; ++i) out[i] = a[i] | b[i];
            break;
          }
          case Connective::Implies: {
            const std::uint64_t *a = val(op.a), *b = val(op.b);
            for (std::size_t c = 0; c < C; ++c) {
              std::uint64_t acc[WC ? WC : 1];
              std::uint64_t* accp = WC ? acc : out + c * W;
              for (std::size_t i = 0; i < W; ++i) accp[i] = ~std::uint64_t{0};
              for (std::uint32_t j = upStart_[c]; j < upStart_[c + 1]; ++j) {
                const std::size_t d = static_cast<std::size_t>(up_[j]) * W;
                for (std::size_t i = 0; i < W; ++i) accp[i] &= ~a[d + i] | b[d + i];
              }
              if (WC) for (std::size_t i = 0; i < W; ++i) out[c * W + i] = accp[i];
            }
            break;
          }
          case Connective::Diamond: {
            const std::uint64_t* a = val(op.a);
            for (std::size_t c = 0; c < C; ++c) {
              std::uint64_t acc[WC ? WC : 1];
              std::uint64_t* accp = WC ? acc : out + c * W;
              for (std::size_t i = 0; i < W; ++i) accp[i] = 0;
              for (std::uint32_t j = diaStart_[c]; j < diaStart_[c + 1]; ++j) {
                const std::size_t d = static_cast<std::size_t>(dia_[j]) * W;
                for (std::size_t i = 0; i < W; ++i) accp[i] |= a[d + i];
              }
              if (WC) for (std::size_t i = 0; i < W; ++i) out[c * W + i] = accp[i];
            }
            break;
          }
          case Connective::Box: {
            const std::uint64_t* a = val(op.a);
            for (std::size_t c = 0; c < C; ++c) {
              std::uint64_t acc[WC ? WC : 1];
              std::uint64_t* accp = WC ? acc : out + c * W;
              for (std::size_t i = 0; i < W; ++i) accp[i] = ~std::uint64_t{0};
              for (std::uint32_t j = boxStart_[c]; j < boxStart_[c + 1]; ++j) {
                const std::size_t d = static_cast<std::size_t>(box_[j]) * W;
                for (std::size_t i = 0; i < W; ++i) accp[i] &= a[d + i];
              }
              if (WC) for (std::size_t i = 0; i < W; ++i) out[c * W + i] = accp[i];
            }
            break;
          }
        }
      };

      for (std::size_t o = 0; o < cf_.ops.size(); ++o)
        if (!cf_.ops[o].outer) evalOp(o);

      const std::uint32_t root = static_cast<std::uint32_t>(cf_.ops.size() - 1);
      for (std::uint64_t t = 0; t < outer; ++t) {
        tried += slots_;
        for (std::size_t o = 0; o < cf_.ops.size(); ++o)
          if (cf_.ops[o].outer) evalOp(o);

        const std::uint64_t* r = val(root);
        for (std::size_t i = 0; i < W; ++i) {
          std::uint64_t bad = 0;
          for (std::size_t c = 0; c < C; ++c) bad |= ~r[c * W + i];
          bad &= valid_[i];
          if (!bad) continue;
          const std::size_t slot = i * 64 + static_cast<std::size_t>(std::countr_zero(bad));
          FrameHit hit;
          hit.digits = digits;
          if (k > 0) hit.digits.push_back(slot);
          for (std::size_t c = 0; c < C; ++c)
            if (!((r[c * W + i] >> (slot % 64)) & 1u)) {
              hit.world = cells_[c].first;
              hit.point = cells_[c].second;
              break;
            }
          return hit;
        }
        for (std::size_t d = digits.size(); d-- > 0;) {
          if (++digits[d] < U) break;
          digits[d] = 0;
        }
      }
      return std::nullopt;
    }

    const CompiledFormula& cf_;
    std::vector<std::array<PointSet, kSearchMaxWorlds>> upsets_;
    std::vector<std::pair<std::size_t, std::size_t>> cells_;
    std::vector<std::uint32_t> upStart_, diaStart_, boxStart_, up_, dia_, box_;
    std::vector<std::uint64_t> valid_, sliced_, values_;
    std::size_t words_ = 1, slots_ = 1;
  };

  inline Countermodel buildCountermodel(const SearchFrame& f, FrameKind kind, const CompiledFormula& cf, const FrameHit& hit) {
    Countermodel cm;
    cm.model = toModel(f, kind);
    const auto upsets = frameUpsets(f);
    for (std::size_t i = 0; i < cf.vars.size(); ++i) {
      auto& sets = cm.model.valuation[cf.vars[i]];
      sets.assign(f.worlds, 0);
      for (std::size_t w = 0; w < f.worlds; ++w) sets[w] = upsets[hit.digits[i]][w];
    }
    cm.world = hit.world;
    cm.point = hit.point;
    return cm;
  }

} // namespace detail

// Visits every model of the budget in canonical order (valuations of
// p1..p_varBound included) until visit returns false.
inline void enumerateModels(const SearchBudget& budget, FrameKind kind,
                            const std::function<bool(const FiniteModel&)>& visit) {
  budget.validate();
  detail::FrameEnumerator frames(budget, kind);
  frames.run([&](const detail::SearchFrame& f) {
    const auto upsets = detail::frameUpsets(f);
    FiniteModel m = detail::toModel(f, kind);
    std::vector<std::size_t> digits(budget.varBound, 0);
    while (true) {
      for (VarIndex p = 1; p <= budget.varBound; ++p) {
        auto& sets = m.valuation[p];
        sets.assign(f.worlds, 0);
        for (std::size_t w = 0; w < f.worlds; ++w) sets[w] = upsets[digits[p - 1]][w];
      }
      if (!visit(m)) return false;
      std::size_t d = digits.size();
      while (d-- > 0) {
        if (++digits[d] < upsets.size()) break;
        digits[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) return true;
    }
  });
}

inline RefutationResult findCountermodel(const Formula& phi, const SearchBudget& budget, FrameKind kind) {
  budget.validate();
  if (phi.maxVar() > budget.varBound)
    throw std::invalid_argument("formula uses p" + std::to_string(phi.maxVar()) + " beyond the variable bound " +
                                std::to_string(budget.varBound));
  const auto start = std::chrono::steady_clock::now();
  const detail::CompiledFormula compiled(phi);
  RefutationResult result;
  auto& stats = result.stats;

  auto timeUp = [&] {
    return budget.timeCap && std::chrono::steady_clock::now() - start >= *budget.timeCap;
  };

  // Frames are tested in blocks; within a block the lowest-index hit wins.
  const std::size_t blockSize = budget.threads > 1 ? 256 : 1;
  std::vector<detail::SearchFrame> block;
  std::vector<detail::SlicedEvaluator> evaluators;
  for (unsigned t = 0; t < budget.threads; ++t) evaluators.emplace_back(compiled);

  auto flush = [&]() -> bool {
    if (block.empty()) return true;
    std::vector<std::optional<detail::FrameHit>> hits(block.size());
    std::vector<std::uint64_t> tried(block.size(), 0);
    if (budget.threads == 1 || block.size() == 1) {
      for (std::size_t i = 0; i < block.size(); ++i) hits[i] = evaluators[0].firstFailure(block[i], tried[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < budget.threads; ++t)
        pool.emplace_back([&, t] {
          for (std::size_t i = next++; i < block.size(); i = next++) hits[i] = evaluators[t].firstFailure(block[i], tried[i]);
        });
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < block.size(); ++i) {
      ++stats.frames;
      stats.valuations += tried[i];
      if (hits[i]) {
        result.countermodel = detail::buildCountermodel(block[i], kind, compiled, *hits[i]);
        block.clear();
        return false;
      }
    }
    block.clear();
    return true;
  };

  std::uint64_t generated = 0;
  detail::FrameEnumerator frames(budget, kind);
  bool finished = frames.run([&](const detail::SearchFrame& f) {
    if (budget.candidateCap && generated >= *budget.candidateCap) {
      stats.complete = false;
      stats.stopReason = "candidate cap";
      return false;
    }
    if ((generated & 63u) == 0 && timeUp()) {
      stats.complete = false;
      stats.stopReason = "time cap";
      return false;
    }
    ++generated;
    block.push_back(f);
    return block.size() < blockSize || flush();
  });
  if (finished || !result.countermodel) flush();
  if (result.countermodel) {
    stats.complete = true;
    stats.stopReason.clear();
    // Self-check through the independent model checker.
    ModelChecker checker(result.countermodel->model);
    if (checker.eval(result.countermodel->world, result.countermodel->point, phi))
      throw std::logic_error("search produced a non-refuting model");
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

enum class Consistency : std::uint8_t { Consistent, SoftMiss, Contradiction };

inline const char* toString(Consistency c) {
  switch (c) {
    case Consistency::Consistent: return "consistent";
    case Consistency::SoftMiss: return "soft-miss";
    case Consistency::Contradiction: return "contradiction";
  }
  return "?";
}

// Pairs an input verdict with an output verdict.  Contradiction is soft
// evidence only: the input's exhaustion does not prove it valid.
inline Consistency classify(const RefutationResult& input, const RefutationResult& output) {
  if (input.refuted()) return output.refuted() ? Consistency::Consistent : Consistency::SoftMiss;
  return output.refuted() ? Consistency::Contradiction : Consistency::Consistent;
}

struct ConsistencyReport {
  Formula input = bottom();
  Formula embedded = bottom();   // e(phi)
  Formula starred = bottom();    // e(phi)*
  SearchBudget budgetIn, budgetOut;
  RefutationResult inputResult, embeddedResult, starredResult;
  Consistency embeddedVerdict = Consistency::Consistent;
  Consistency starredVerdict = Consistency::Consistent;
};

// Runs the search on phi (budgetIn), e(phi) and e(phi)* (budgetOut).  The
// variable bound of each search is widened to the formula's largest variable.
inline ConsistencyReport checkTranslationConsistency(const Formula& phi, SearchBudget budgetIn, SearchBudget budgetOut,
                                                     FrameKind kind) {
  ConsistencyReport r;
  r.input = phi;
  r.embedded = positiveEmbed(phi).embedded;
  r.starred = star(r.embedded);
  budgetIn.varBound = std::max(budgetIn.varBound, phi.maxVar());
  r.budgetIn = budgetIn;
  r.budgetOut = budgetOut;

  r.inputResult = findCountermodel(phi, budgetIn, kind);
  SearchBudget forEmbedded = budgetOut;
  forEmbedded.varBound = std::max(budgetOut.varBound, r.embedded.maxVar());
  r.embeddedResult = findCountermodel(r.embedded, forEmbedded, kind);
  SearchBudget forStar = budgetOut;
  forStar.varBound = std::max<VarIndex>(1, r.starred.maxVar());
  r.starredResult = findCountermodel(r.starred, forStar, kind);

  r.embeddedVerdict = classify(r.inputResult, r.embeddedResult);
  r.starredVerdict = classify(r.inputResult, r.starredResult);
  return r;
}

} // namespace imred

#endif
