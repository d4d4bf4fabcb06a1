#pragma once

// Exact 16x-bracket comparisons on dyadic estimates, done in integers so no
// floating-point rounding can flip a verdict.

#include "auditcount/counters.hpp"

namespace auditcount::testsupport {

using u128 = unsigned __int128;

inline u128 ipow(u128 base, int exp) {
  u128 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// count/16 <= 2^(num/den), i.e. 2^(num + 4 den) >= count^den.
inline bool at_least_sixteenth(const Estimate& e, std::uint64_t count) {
  if (!e.dyadic) return 16 * e.exact >= count;
  return (u128{1} << (e.num + 4 * e.den)) >= ipow(count, e.den);
}

/// 2^(num/den) <= 16 * count, i.e. 2^num <= (16 count)^den.
inline bool at_most_sixteen_times(const Estimate& e, std::uint64_t count) {
  if (!e.dyadic) return e.exact <= 16 * count;
  return (u128{1} << e.num) <= ipow(16 * u128{count}, e.den);
}

inline bool within_16x(const Estimate& e, std::uint64_t count) {
  return at_least_sixteenth(e, count) && at_most_sixteen_times(e, count);
}

}  // namespace auditcount::testsupport
