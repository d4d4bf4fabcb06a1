#include <doctest.h>

#include <cmath>
#include <set>

#include "auditcount/formula.hpp"
#include "auditcount/hash_family.hpp"

using namespace auditcount;

TEST_CASE("degenerate coefficient choices") {
  Rng rng(1);
  HashFunction zero = sample_hash(4, 2, 2, rng);
  zero.coeffs[0] = FieldElem{};
  zero.coeffs[1] = FieldElem{};
  for (std::uint64_t y = 0; y < 16; ++y)
    CHECK(eval_hash_cell(zero, Assignment::from_u64(y, 4)) == 0);

  HashFunction identity = sample_hash(4, 4, 2, rng);
  identity.coeffs[0] = FieldElem{};
  identity.coeffs[1] = FieldElem::from_u64(1);
  for (std::uint64_t y = 0; y < 16; ++y)
    CHECK(eval_hash_cell(identity, Assignment::from_u64(y, 4)) == y);
}

TEST_CASE("sampling is seed-deterministic and seed-sensitive") {
  Rng a(42), b(42);
  CHECK(sample_tuple(3, 16, 16, 2, a) == sample_tuple(3, 16, 16, 2, b));

  int distinct = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng left(seed), right(seed + 1000);
    if (!(sample_hash(16, 16, 2, left) == sample_hash(16, 16, 2, right)))
      ++distinct;
  }
  // Collision chance per pair is 2^-(k*w) = 2^-32; any repeat is a bug.
  CHECK(distinct == 100);
}

TEST_CASE("sampled coefficients respect the field width") {
  Rng rng(9);
  HashFunction h = sample_hash(6, 3, 4, rng);
  CHECK(h.spec.w == 6);
  CHECK(h.coeffs.size() == 4);
  for (const FieldElem& c : h.coeffs) CHECK(gf2_truncate(c, 6) == c);
}

TEST_CASE("packed coefficient blocks round-trip bit-exactly") {
  Rng rng(11);
  for (auto [n, m, k] : {std::tuple{5, 3, 2}, {12, 7, 2}, {6, 6, 6}}) {
    HashFunction h = sample_hash(n, m, k, rng);
    auto bytes = pack_coeffs(h);
    CHECK(bytes.size() == static_cast<std::size_t>((k * h.spec.w + 7) / 8));
    CHECK(unpack_coeffs(n, m, k, h.spec, bytes) == h);
  }
}

TEST_CASE("coefficient bit layout matches hash_from_bits") {
  Rng rng(13);
  HashFunction h = sample_hash(5, 2, 2, rng);
  std::vector<bool> bits = coeff_bits(h);
  CHECK(bits.size() == static_cast<std::size_t>(2 * h.spec.w));
  CHECK(hash_from_bits(5, 2, 2, bits, 0) == h);
}

TEST_CASE("truncation keeps the low output bits") {
  Rng rng(17);
  HashFunction h = sample_hash(6, 4, 2, rng);
  HashFunction t = h.truncated(2);
  for (std::uint64_t y = 0; y < 64; ++y) {
    Assignment a = Assignment::from_u64(y, 6);
    CHECK(eval_hash_cell(t, a) == (eval_hash_cell(h, a) & 0b11));
  }
}

TEST_CASE("pairwise joint probability sits near the independence target") {
  // k=2, n=m=4: for fixed distinct inputs and fixed outputs, the joint
  // probability over a uniform draw is 2^-2m = 1/256.
  constexpr int kDraws = 10'000;
  const double p = 1.0 / 256.0;
  const double se = std::sqrt(p * (1 - p) / kDraws);
  Assignment y1 = Assignment::from_u64(0b0011, 4);
  Assignment y2 = Assignment::from_u64(0b1010, 4);
  int hits = 0;
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    Rng rng(900'000 + i);
    HashFunction h = sample_hash(4, 4, 2, rng);
    if (eval_hash_cell(h, y1) == 0b0110 && eval_hash_cell(h, y2) == 0b1100)
      ++hits;
  }
  double observed = static_cast<double>(hits) / kDraws;
  CHECK(std::abs(observed - p) <= 4 * se);
}
