// imred/spiral.hpp :: shell-walk enumeration of {2,3,...} x {2,3,...}
//
// Cells are visited shell by shell, shell s = max(i, j).  Shell 2 is the
// single cell (2,2).  An odd shell s is entered from (s-1, 2) by a step to
// (s, 2), climbs to (s, s), then runs left to (2, s); an even shell is
// entered from (2, s-1) by a step to (2, s), runs right to (s, s), then
// descends to (s, 2).  Shells below s hold (s-2)^2 cells.

#ifndef IMRED_SPIRAL_HPP
#define IMRED_SPIRAL_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace imred {

struct GridCell {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  bool operator==(const GridCell&) const = default;
};

namespace detail {
  inline std::uint64_t isqrtCeil(std::uint64_t r) {
    // smallest q with q*q >= r
    std::uint64_t lo = 0, hi = std::min<std::uint64_t>(r, 4294967296ull);
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (mid * mid >= r) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }
} // namespace detail

inline std::uint64_t spiralIndex(std::uint64_t i, std::uint64_t j) {
  if (i < 2 || j < 2)
    throw std::invalid_argument("spiral cell (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside {2,3,...}^2");
  const std::uint64_t s = std::max(i, j);
  if (s >= 4294967296ull) throw std::overflow_error("spiral cell too large");
  const std::uint64_t before = (s - 2) * (s - 2);
  if (s == 2) return 1;
  std::uint64_t offset;
  if (s % 2 == 1) offset = (i == s) ? j - 1 : (s - 1) + (s - i);
  else offset = (j == s) ? i - 1 : (s - 1) + (s - j);
  return before + offset;
}

inline GridCell spiralCell(std::uint64_t r) {
  if (r == 0) throw std::invalid_argument("spiral ranks start at 1");
  const std::uint64_t s = detail::isqrtCeil(r) + 1;
  const std::uint64_t offset = r - (s - 2) * (s - 2);   // 1 .. 2s-3
  if (s == 2) return {2, 2};
  const bool firstLeg = offset <= s - 1;
  if (s % 2 == 1) return firstLeg ? GridCell{s, offset + 1} : GridCell{s - (offset - (s - 1)), s};
  return firstLeg ? GridCell{offset + 1, s} : GridCell{s, s - (offset - (s - 1))};
}

} // namespace imred

#endif
