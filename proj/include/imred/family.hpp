// imred/family.hpp :: the A/B formula family over one variable
//
// Three seed formulas over a single variable p,
//
//   G1 = <>p      G2 = <>p -> p      G3 = p -> []p
//
// generate level 0 (A1, A2, B1, B2) and level 1 (A1..A3, B1..B3) from fixed
// tables.  From level k >= 1 onwards, for i, j in {2..n_k} and r = g(i, j),
//
//   A^{k+1}_r = A^k_1 -> B^k_1 | A^k_i | B^k_j
//   B^{k+1}_r = B^k_1 -> A^k_1 | A^k_i | B^k_j
//
// so n_{k+1} = (n_k - 1)^2.  Multi-way connectives associate to the left.

#ifndef IMRED_FAMILY_HPP
#define IMRED_FAMILY_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "formula.hpp"
#include "spiral.hpp"

namespace imred {

using BigNat = boost::multiprecision::cpp_int;

enum class Letter : std::uint8_t { A, B };

struct FamilyId {
  std::size_t level = 0;
  Letter letter = Letter::A;
  std::uint64_t index = 1;
  auto operator<=>(const FamilyId&) const = default;
};

inline std::string toString(const FamilyId& id) {
  return std::string(id.letter == Letter::A ? "A" : "B") + "^" + std::to_string(id.level) + "_" +
         std::to_string(id.index);
}

// n_k: n_0 = 2, n_1 = 3, n_{k+1} = (n_k - 1)^2.
inline BigNat levelCount(std::size_t k) {
  if (k == 0) return 2;
  BigNat n = 3;
  for (std::size_t level = 1; level < k; ++level) {
    BigNat m = n - 1;
    n = m * m;
  }
  return n;
}

// Whether `index` names a member of level k.
inline bool validFamilyIndex(std::size_t level, std::uint64_t index) {
  if (index == 0) return false;
  if (level >= 8) return true;   // n_8 > 2^64
  return BigNat(index) <= levelCount(level);
}

class FamilyBuilder {
public:
  explicit FamilyBuilder(VarIndex baseVar = 1, bool memoize = true)
      : p_(var(baseVar)), memoize_(memoize) {}

  Formula g1() const { return diamond(p_); }
  Formula g2() const { return implies(diamond(p_), p_); }
  Formula g3() const { return implies(p_, box(p_)); }

  Formula operator()(const FamilyId& id) {
    if (!validFamilyIndex(id.level, id.index))
      throw std::out_of_range("family index " + std::to_string(id.index) + " out of range for level " +
                              std::to_string(id.level) + " (valid: 1.." + levelCount(id.level).str() +
                              ")");
    return build(id);
  }

  Formula a(std::size_t level, std::uint64_t index) { return (*this)({level, Letter::A, index}); }
  Formula b(std::size_t level, std::uint64_t index) { return (*this)({level, Letter::B, index}); }

  std::size_t memoSize() const {
    std::lock_guard lock(mutex_);
    return memo_.size();
  }

private:
  Formula build(const FamilyId& id) {
    if (memoize_) {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(id); it != memo_.end()) return it->second;
    }
    Formula out = construct(id);
    if (memoize_) {
      std::lock_guard lock(mutex_);
      memo_.emplace(id, out);
    }
    return out;
  }

  Formula A(std::size_t k, std::uint64_t i) { return build({k, Letter::A, i}); }
  Formula B(std::size_t k, std::uint64_t i) { return build({k, Letter::B, i}); }

  Formula construct(const FamilyId& id) {
    const bool isA = id.letter == Letter::A;
    if (id.level == 0) {
      const Formula G1 = g1(), G2 = g2(), G3 = g3();
      switch (id.index) {
        case 1: return isA ? implies(G2, disj(G1, G3)) : implies(G1, disj(G2, G3));
        case 2:
          if (isA) return implies(G3, disj(G1, G2));
          return implies(conjAll({A(0, 1), A(0, 2), B(0, 1)}), disjAll({G1, G2, G3}));
      }
    } else if (id.level == 1) {
      const Formula a1 = A(0, 1), a2 = A(0, 2), b1 = B(0, 1), b2 = B(0, 2);
      if (isA) {
        switch (id.index) {
          case 1: return implies(conj(a1, a2), disj(b1, b2));
          case 2: return implies(conj(a1, b1), disj(a2, b2));
          case 3: return implies(conj(a1, b2), disj(a2, b1));
        }
      } else {
        switch (id.index) {
          case 1: return implies(conj(a2, b1), disj(a1, b2));
          case 2: return implies(conj(a2, b2), disj(a1, b1));
          case 3: return implies(conj(b1, b2), disj(a1, a2));
        }
      }
    } else {
      const std::size_t k = id.level - 1;
      const GridCell cell = spiralCell(id.index);
      return isA ? implies(A(k, 1), disj(disj(B(k, 1), A(k, cell.i)), B(k, cell.j)))
                 : implies(B(k, 1), disj(disj(A(k, 1), A(k, cell.i)), B(k, cell.j)));
    }
    throw std::out_of_range("family index out of range: " + toString(id));
  }

  Formula p_;
  bool memoize_;
  mutable std::mutex mutex_;
  std::map<FamilyId, Formula> memo_;
};

inline Formula familyFormula(const FamilyId& id, VarIndex baseVar = 1) {
  FamilyBuilder builder(baseVar);
  return builder(id);
}

// l_0 = |A^0_1| + |B^0_1| + |A^0_2| + |B^0_2| over p1.
inline std::uint64_t baseLength() {
  static const std::uint64_t value = [] {
    FamilyBuilder fam(1);
    return fam.a(0, 1).length() + fam.b(0, 1).length() + fam.a(0, 2).length() + fam.b(0, 2).length();
  }();
  return value;
}

inline BigNat pow5(std::size_t k) {
  BigNat out = 1;
  for (std::size_t i = 0; i < k; ++i) out *= 5;
  return out;
}

// Certificate that n_k > l_0 * 5^k for every k >= k0.
struct StabilityCertificate {
  std::size_t k0 = 0;
  BigNat countAtK0;         // n_{k0}
  BigNat thresholdAtK0;     // l_0 * 5^{k0}
  bool inductiveStepHolds;  // (n-1)^2 >= 5n at n = n_{k0}, and n_{k0} >= 7
};

// Least k with n_k > l_0 5^k and n_k >= 7.  Since (n - 1)^2 >= 5n for n >= 7,
// these two facts at k0 carry over to every larger level.
inline StabilityCertificate stabilityCertificate() {
  const BigNat l0 = baseLength();
  for (std::size_t k = 0; k < 64; ++k) {
    BigNat n = levelCount(k);
    BigNat threshold = l0 * pow5(k);
    if (n > threshold && n >= 7) {
      BigNat next = (n - 1) * (n - 1);
      bool step = next >= 5 * n && next > threshold * 5;
      if (!step) throw std::logic_error("level-count dominance step failed at k = " + std::to_string(k));
      return {k, n, threshold, step};
    }
  }
  throw std::logic_error("no stability level below 64");
}

inline std::size_t stabilityLevel() {
  static const std::size_t k0 = stabilityCertificate().k0;
  return k0;
}

} // namespace imred

#endif
