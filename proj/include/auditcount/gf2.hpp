#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace auditcount {

/// Element of GF(2^w) for w <= 256, packed little-endian (bit i = coeff of x^i).
struct FieldElem {
  std::array<std::uint64_t, 4> limbs{};

  bool operator==(const FieldElem&) const = default;
  bool bit(int i) const { return (limbs[i >> 6] >> (i & 63)) & 1; }
  void set_bit(int i) { limbs[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool is_zero() const {
    return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0;
  }
  std::uint64_t low64() const { return limbs[0]; }

  static FieldElem from_u64(std::uint64_t v) {
    FieldElem e;
    e.limbs[0] = v;
    return e;
  }
};

/// GF(2^w) described by its degree and irreducible modulus (w+1 bits).
struct FieldSpec {
  int w = 0;
  std::array<std::uint64_t, 5> modulus{};  // bits 0..w, bit w always set

  bool operator==(const FieldSpec&) const = default;

  /// One fixed modulus per degree: the irreducible polynomial with the
  /// smallest integer encoding. Certificates name (w, modulus), so audits
  /// reproduce across builds as long as this table is stable.
  static FieldSpec for_width(int w);

  std::string modulus_hex() const;
  static FieldSpec from_modulus_hex(int w, const std::string& hex);
};

FieldElem gf2_add(const FieldElem& a, const FieldElem& b);
FieldElem gf2_mul(const FieldSpec& spec, const FieldElem& a, const FieldElem& b);
FieldElem gf2_pow(const FieldSpec& spec, FieldElem a, std::uint64_t e);
/// a^(2^w - 2); the inverse of a for a != 0.
FieldElem gf2_inv(const FieldSpec& spec, const FieldElem& a);

/// Keep only the low m bits.
FieldElem gf2_truncate(FieldElem a, int m);

/// Polynomial over GF(2), arbitrary degree, packed like FieldElem but unbounded.
struct BitPoly {
  std::vector<std::uint64_t> words;
  int degree() const;  // -1 for the zero polynomial
  bool bit(int i) const;
  static BitPoly from_u64(std::uint64_t v);
};

/// Rabin's criterion: x^(2^w) == x (mod p) and gcd(x^(2^(w/q)) - x, p) = 1
/// for every prime q dividing w.
bool verify_irreducible(const BitPoly& p);

/// Hex for bit vectors (most significant nibble first, no 0x prefix).
std::string bits_to_hex(std::span<const std::uint64_t> words, int nbits);
std::vector<std::uint64_t> hex_to_bits(const std::string& hex, int nbits);

}  // namespace auditcount
