#include <doctest.h>
#include <bit>
#include <stdexcept>

#include "auditcount/gf2.hpp"
#include "auditcount/rng.hpp"

using namespace auditcount;

namespace {

FieldElem fe(std::uint64_t v) { return FieldElem::from_u64(v); }

// Independent irreducibility oracle for small degrees: trial division by
// every polynomial of degree 1..deg/2, with plain integer bit twiddling.
bool trial_division_irreducible(std::uint64_t p) {
  int deg = 63 - std::countl_zero(p);
  if (deg < 1) return false;
  for (std::uint64_t d = 2; d < (std::uint64_t{2} << (deg / 2)); ++d) {
    int dd = 63 - std::countl_zero(d);
    if (dd < 1) continue;
    std::uint64_t r = p;
    int rd;
    while ((rd = r ? 63 - std::countl_zero(r) : -1) >= dd) r ^= d << (rd - dd);
    if (r == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("multiplication in GF(2^3) against hand-reduced products") {
  FieldSpec s = FieldSpec::for_width(3);
  CHECK(s.modulus[0] == 0b1011);  // x^3 + x + 1

  CHECK(gf2_mul(s, fe(0b010), fe(0b010)).low64() == 0b100);
  for (std::uint64_t a = 0; a < 8; ++a)
    CHECK(gf2_mul(s, fe(a), fe(0b001)).low64() == a);
  // (x^2+x)(x+1) = x^3+x = 1 mod x^3+x+1
  CHECK(gf2_mul(s, fe(0b110), fe(0b011)).low64() == 0b001);
}

TEST_CASE("irreducibility test agrees with trial division up to degree 10") {
  CHECK(verify_irreducible(BitPoly::from_u64(0b111)));    // x^2+x+1
  CHECK(!verify_irreducible(BitPoly::from_u64(0b101)));   // (x+1)^2
  CHECK(verify_irreducible(BitPoly::from_u64(0b1011)));   // x^3+x+1

  for (std::uint64_t p = 0b100; p < (1u << 11); ++p) {
    CAPTURE(p);
    CHECK(verify_irreducible(BitPoly::from_u64(p)) ==
          trial_division_irreducible(p));
  }
}

TEST_CASE("every embedded modulus is irreducible") {
  for (int w = 1; w <= 256; ++w) {
    FieldSpec s = FieldSpec::for_width(w);
    BitPoly p;
    p.words.assign(s.modulus.begin(), s.modulus.end());
    CAPTURE(w);
    CHECK(p.degree() == w);
    CHECK(verify_irreducible(p));
  }
}

TEST_CASE("field axioms on random triples") {
  for (int w : {3, 8, 16, 64}) {
    FieldSpec s = FieldSpec::for_width(w);
    Rng rng(2024'0000 + w);
    FieldElem one = fe(1);
    for (int i = 0; i < 10'000; ++i) {
      FieldElem a = fe(rng.next_bits(w));
      FieldElem b = fe(rng.next_bits(w));
      FieldElem c = fe(rng.next_bits(w));
      CHECK(gf2_mul(s, a, b) == gf2_mul(s, b, a));
      CHECK(gf2_mul(s, gf2_mul(s, a, b), c) == gf2_mul(s, a, gf2_mul(s, b, c)));
      CHECK(gf2_mul(s, a, gf2_add(b, c)) ==
            gf2_add(gf2_mul(s, a, b), gf2_mul(s, a, c)));
      CHECK(gf2_mul(s, a, one) == a);
      if (!a.is_zero()) {
        CHECK(gf2_mul(s, a, gf2_inv(s, a)) == one);
      }
    }
  }
}

TEST_CASE("wide-field multiplication stays inside the field") {
  FieldSpec s = FieldSpec::for_width(200);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    FieldElem a, b;
    for (int limb = 0; limb < 4; ++limb) {
      a.limbs[limb] = rng.next();
      b.limbs[limb] = rng.next();
    }
    a = gf2_truncate(a, 200);
    b = gf2_truncate(b, 200);
    FieldElem p = gf2_mul(s, a, b);
    CHECK(gf2_truncate(p, 200) == p);
    if (!a.is_zero()) CHECK(gf2_mul(s, a, gf2_inv(s, a)) == fe(1));
  }
}

TEST_CASE("hex codecs round-trip and reject junk") {
  FieldSpec s = FieldSpec::for_width(19);
  CHECK(FieldSpec::from_modulus_hex(19, s.modulus_hex()) == s);
  CHECK_THROWS_AS(hex_to_bits("zz", 8), std::invalid_argument);
  CHECK_THROWS_AS(hex_to_bits("ff", 7), std::invalid_argument);
  CHECK(bits_to_hex(hex_to_bits("7f", 7), 7) == "7f");
}
