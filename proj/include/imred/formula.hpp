// imred/formula.hpp :: Formula, metrics, substitution, modal chains
//
// Formulas are immutable and hash-consed: two structurally equal formulas
// built anywhere in the process share one node, so equality is a pointer
// comparison and repeated subformulas (the A/B family is a DAG with massive
// sharing) cost nothing extra.  Every metric that is defined on the tree
// (length, modal depth, positivity) is cached per node so it reads as if the
// tree were fully expanded.

#ifndef IMRED_FORMULA_HPP
#define IMRED_FORMULA_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace imred {

using VarIndex = std::uint32_t;

enum class Connective : std::uint8_t { Var, Bottom, And, Or, Implies, Diamond, Box };

inline bool isBinary(Connective c) noexcept {
  return c == Connective::And || c == Connective::Or || c == Connective::Implies;
}
inline bool isModal(Connective c) noexcept { return c == Connective::Diamond || c == Connective::Box; }

namespace detail {

  struct Node {
    Connective kind;
    VarIndex var;                       // Var only
    std::shared_ptr<const Node> lhs;    // binary left, or modal child
    std::shared_ptr<const Node> rhs;    // binary right
    std::size_t hash;
    std::uint64_t length;
    std::uint32_t depth;
    VarIndex maxVar;                    // 0 when no variables occur
    bool positive;
  };

  struct NodeKey {
    Connective kind;
    VarIndex var;
    const Node* lhs;
    const Node* rhs;
    bool operator==(const NodeKey&) const = default;
  };

  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const noexcept {
      std::size_t h = static_cast<std::size_t>(k.kind) * 0x9E3779B97F4A7C15ull;
      auto mix = [&h](std::size_t v) { h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2); };
      mix(k.var);
      mix(std::hash<const void*>{}(k.lhs));
      mix(std::hash<const void*>{}(k.rhs));
      return h;
    }
  };

  inline std::uint64_t checkedAdd(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = a + b;
    if (r < a) throw std::overflow_error("formula length exceeds 64-bit range");
    return r;
  }

  // Process-wide unique table.  Entries are weak so unused formulas are freed.
  class Interner {
  public:
    static Interner& instance() {
      // Never destroyed: formulas held in other statics may outlive it otherwise.
      static Interner* inst = new Interner;
      return *inst;
    }

    std::shared_ptr<const Node> make(Connective kind, VarIndex var,
                                     std::shared_ptr<const Node> lhs,
                                     std::shared_ptr<const Node> rhs) {
      NodeKey key{kind, var, lhs.get(), rhs.get()};
      std::lock_guard lock(mutex_);
      if (auto it = table_.find(key); it != table_.end()) {
        if (auto existing = it->second.lock()) return existing;
      }
      auto* raw = new Node{kind, var, std::move(lhs), std::move(rhs), NodeKeyHash{}(key), 0, 0, 0, true};
      fillMetrics(*raw);
      std::shared_ptr<const Node> node(raw, [this, key](const Node* n) { release(key, n); });
      table_[key] = node;
      return node;
    }

    std::size_t size() const {
      std::lock_guard lock(mutex_);
      return table_.size();
    }

  private:
    Interner() = default;

    static void fillMetrics(Node& n) {
      switch (n.kind) {
        case Connective::Var:
          n.length = 1 + static_cast<std::uint64_t>(std::bit_width(n.var));
          n.maxVar = n.var;
          break;
        case Connective::Bottom:
          n.length = 1;
          n.positive = false;
          break;
        case Connective::Diamond:
        case Connective::Box:
          n.length = checkedAdd(n.lhs->length, 1);
          n.depth = n.lhs->depth + 1;
          n.maxVar = n.lhs->maxVar;
          n.positive = n.lhs->positive;
          break;
        default:
          n.length = checkedAdd(checkedAdd(n.lhs->length, n.rhs->length), 1);
          n.depth = std::max(n.lhs->depth, n.rhs->depth);
          n.maxVar = std::max(n.lhs->maxVar, n.rhs->maxVar);
          n.positive = n.lhs->positive && n.rhs->positive;
          break;
      }
    }

    void release(const NodeKey& key, const Node* n) {
      {
        std::lock_guard lock(mutex_);
        // Another thread may already have re-created this key.
        if (auto it = table_.find(key); it != table_.end() && it->second.expired()) table_.erase(it);
      }
      delete n;   // children released outside the lock
    }

    mutable std::mutex mutex_;
    std::unordered_map<NodeKey, std::weak_ptr<const Node>, NodeKeyHash> table_;
  };

} // namespace detail

// Immutable formula handle.  Cheap to copy; equality is structural.
class Formula {
public:
  static Formula var(VarIndex index) {
    if (index == 0) throw std::invalid_argument("variable indices start at 1");
    return Formula(detail::Interner::instance().make(Connective::Var, index, nullptr, nullptr));
  }
  static Formula bottom() {
    return Formula(detail::Interner::instance().make(Connective::Bottom, 0, nullptr, nullptr));
  }
  static Formula make(Connective kind, const Formula& lhs, const Formula& rhs) {
    if (!isBinary(kind)) throw std::invalid_argument("binary connective expected");
    return Formula(detail::Interner::instance().make(kind, 0, lhs.node_, rhs.node_));
  }
  static Formula make(Connective kind, const Formula& child) {
    if (!isModal(kind)) throw std::invalid_argument("modal connective expected");
    return Formula(detail::Interner::instance().make(kind, 0, child.node_, nullptr));
  }

  Connective kind() const noexcept { return node_->kind; }
  VarIndex varIndex() const noexcept { return node_->var; }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  Formula child() const { return Formula(node_->lhs); }

  // Symbol count of the expanded tree; Var(i) costs 1 + bit_width(i).
  std::uint64_t length() const noexcept { return node_->length; }
  std::size_t mdepth() const noexcept { return node_->depth; }
  bool isPositive() const noexcept { return node_->positive; }
  VarIndex maxVar() const noexcept { return node_->maxVar; }

  // Identity of the shared node; stable while any handle is alive.
  const void* id() const noexcept { return node_.get(); }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b) noexcept { return a.node_ == b.node_; }

private:
  explicit Formula(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

inline Formula var(VarIndex i) { return Formula::var(i); }
inline Formula bottom() { return Formula::bottom(); }
inline Formula conj(const Formula& a, const Formula& b) { return Formula::make(Connective::And, a, b); }
inline Formula disj(const Formula& a, const Formula& b) { return Formula::make(Connective::Or, a, b); }
inline Formula implies(const Formula& a, const Formula& b) { return Formula::make(Connective::Implies, a, b); }
inline Formula diamond(const Formula& a) { return Formula::make(Connective::Diamond, a); }
inline Formula box(const Formula& a) { return Formula::make(Connective::Box, a); }

inline std::size_t mdepth(const Formula& f) noexcept { return f.mdepth(); }
inline std::uint64_t length(const Formula& f) noexcept { return f.length(); }
inline bool isPositive(const Formula& f) noexcept { return f.isPositive(); }

// Calls visit once per distinct subformula, children before parents.
template <class Visit>
void forEachSubformula(const Formula& root, Visit&& visit) {
  std::unordered_set<const void*> seen;
  std::vector<std::pair<Formula, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [f, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      visit(f);
      continue;
    }
    if (!seen.insert(f.id()).second) continue;
    stack.emplace_back(f, true);
    if (isBinary(f.kind())) {
      stack.emplace_back(f.right(), false);
      stack.emplace_back(f.left(), false);
    } else if (isModal(f.kind())) {
      stack.emplace_back(f.child(), false);
    }
  }
}

using VarSet = std::set<VarIndex>;

inline VarSet varset(const Formula& f) {
  VarSet out;
  forEachSubformula(f, [&](const Formula& g) {
    if (g.kind() == Connective::Var) out.insert(g.varIndex());
  });
  return out;
}

// Number of distinct nodes in the shared representation.
inline std::size_t dagSize(const Formula& f) {
  std::size_t n = 0;
  forEachSubformula(f, [&](const Formula&) { ++n; });
  return n;
}

// Rebuilds f bottom-up, replacing leaves through `leaf`; shared subformulas are
// rewritten once.
template <class LeafFn>
Formula rewriteLeaves(const Formula& f, LeafFn&& leaf) {
  std::unordered_map<const void*, Formula> done;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (auto it = done.find(g.id()); it != done.end()) return it->second;
    Formula out = g;
    switch (g.kind()) {
      case Connective::Var:
      case Connective::Bottom:
        out = leaf(g);
        break;
      case Connective::Diamond:
      case Connective::Box: {
        Formula c = go(g.child());
        if (!(c == g.child())) out = Formula::make(g.kind(), c);
        break;
      }
      default: {
        Formula l = go(g.left());
        Formula r = go(g.right());
        if (!(l == g.left()) || !(r == g.right())) out = Formula::make(g.kind(), l, r);
        break;
      }
    }
    done.emplace(g.id(), out);
    return out;
  };
  return go(f);
}

// Simultaneous substitution; unbound variables are left alone.
inline Formula substitute(const Formula& f, const std::map<VarIndex, Formula>& bindings) {
  if (bindings.empty()) return f;
  return rewriteLeaves(f, [&](const Formula& leaf) {
    if (leaf.kind() == Connective::Var) {
      if (auto it = bindings.find(leaf.varIndex()); it != bindings.end()) return it->second;
    }
    return leaf;
  });
}

// [psi / false] f
inline Formula replaceBottom(const Formula& f, const Formula& psi) {
  return rewriteLeaves(f, [&](const Formula& leaf) {
    return leaf.kind() == Connective::Bottom ? psi : leaf;
  });
}

// psi | <>psi | ... | <>^m psi, right-nested.
inline Formula diamondChain(std::size_t m, const Formula& psi) {
  std::vector<Formula> powers{psi};
  for (std::size_t i = 1; i <= m; ++i) powers.push_back(diamond(powers.back()));
  Formula out = powers.back();
  for (std::size_t i = m; i-- > 0;) out = disj(powers[i], out);
  return out;
}

// psi & []psi & ... & []^m psi, right-nested.
inline Formula boxChain(std::size_t m, const Formula& psi) {
  std::vector<Formula> powers{psi};
  for (std::size_t i = 1; i <= m; ++i) powers.push_back(box(powers.back()));
  Formula out = powers.back();
  for (std::size_t i = m; i-- > 0;) out = conj(powers[i], out);
  return out;
}

// Left-associated conjunction/disjunction of a non-empty list.
inline Formula conjAll(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}
inline Formula disjAll(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

} // namespace imred

template <>
struct std::hash<imred::Formula> {
  std::size_t operator()(const imred::Formula& f) const noexcept { return f.hash(); }
};

#endif
