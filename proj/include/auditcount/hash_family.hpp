#pragma once

#include <cstdint>
#include <vector>

#include "auditcount/gf2.hpp"
#include "auditcount/rng.hpp"

namespace auditcount {

struct Assignment;

/// Member of the k-wise independent family H(n,m,k): a degree-(k-1)
/// polynomial over GF(2^w) with w = max(n,m), applied to the zero-extended
/// input and truncated to its low m output bits.
struct HashFunction {
  int n = 0;  // input width
  int m = 0;  // output width
  int k = 0;  // independence degree = number of coefficients
  FieldSpec spec;
  std::vector<FieldElem> coeffs;  // a1..ak, h(x) = a1 + a2 x + ... + ak x^(k-1)

  bool operator==(const HashFunction&) const = default;

  /// Same coefficients read as a member of H(n, m', k) for m' <= m.
  HashFunction truncated(int new_m) const;
};

struct HashTuple {
  std::vector<HashFunction> members;  // uniform (n, m, k)

  bool operator==(const HashTuple&) const = default;
  int size() const { return static_cast<int>(members.size()); }
};

/// Evaluate h on an n-bit input; result has the low m bits set, rest zero.
FieldElem eval_hash(const HashFunction& h, const Assignment& y);
/// Cell index as an integer; requires m <= 64.
std::uint64_t eval_hash_cell(const HashFunction& h, const Assignment& y);

HashFunction sample_hash(int n, int m, int k, Rng& rng);
HashTuple sample_tuple(int count, int n, int m, int k, Rng& rng);

/// Coefficient payload packed to ceil(k*w/8) bytes, little-endian bit order.
std::vector<std::uint8_t> pack_coeffs(const HashFunction& h);
HashFunction unpack_coeffs(int n, int m, int k, const FieldSpec& spec,
                           const std::vector<std::uint8_t>& bytes);

/// Bits of the coefficient block in prefix-variable order: coefficient a1
/// first, each coefficient little-endian. This is the order quantified
/// hash variables take in emitted formulas.
std::vector<bool> coeff_bits(const HashFunction& h);
HashFunction hash_from_bits(int n, int m, int k, const std::vector<bool>& bits,
                            std::size_t offset);

}  // namespace auditcount
