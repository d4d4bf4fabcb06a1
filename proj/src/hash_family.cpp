#include "auditcount/hash_family.hpp"

#include <stdexcept>

#include "auditcount/formula.hpp"

namespace auditcount {

HashFunction HashFunction::truncated(int new_m) const {
  if (new_m > m) throw std::invalid_argument("can only truncate downward");
  HashFunction h = *this;
  h.m = new_m;
  return h;
}

namespace {

FieldElem embed(const Assignment& y, int w) {
  // Zero-extend the n input bits into the field, variable 1 = bit 0.
  FieldElem x;
  for (int i = 0; i < 4; ++i) x.limbs[i] = y.words[i];
  return gf2_truncate(x, w);
}

}  // namespace

FieldElem eval_hash(const HashFunction& h, const Assignment& y) {
  if (static_cast<int>(y.width) != h.n)
    throw std::invalid_argument("hash input width mismatch");
  FieldElem x = embed(y, h.spec.w);
  // Horner over a1 + a2 x + ... + ak x^(k-1).
  FieldElem acc = h.coeffs[h.k - 1];
  for (int i = h.k - 2; i >= 0; --i)
    acc = gf2_add(gf2_mul(h.spec, acc, x), h.coeffs[i]);
  return gf2_truncate(acc, h.m);
}

std::uint64_t eval_hash_cell(const HashFunction& h, const Assignment& y) {
  if (h.m > 64) throw std::invalid_argument("cell index wider than 64 bits");
  return eval_hash(h, y).low64();
}

HashFunction sample_hash(int n, int m, int k, Rng& rng) {
  if (n < 1 || m < 1 || k < 1) throw std::invalid_argument("bad hash parameters");
  HashFunction h;
  h.n = n;
  h.m = m;
  h.k = k;
  h.spec = FieldSpec::for_width(std::max(n, m));
  h.coeffs.resize(k);
  for (int i = 0; i < k; ++i) {
    FieldElem e;
    int bits = h.spec.w;
    for (int wi = 0; bits > 0; ++wi, bits -= 64)
      e.limbs[wi] = rng.next_bits(std::min(bits, 64));
    h.coeffs[i] = e;
  }
  return h;
}

HashTuple sample_tuple(int count, int n, int m, int k, Rng& rng) {
  HashTuple t;
  t.members.reserve(count);
  for (int i = 0; i < count; ++i) t.members.push_back(sample_hash(n, m, k, rng));
  return t;
}

std::vector<std::uint8_t> pack_coeffs(const HashFunction& h) {
  int total_bits = h.k * h.spec.w;
  std::vector<std::uint8_t> bytes((total_bits + 7) / 8, 0);
  int pos = 0;
  for (const FieldElem& c : h.coeffs) {
    for (int b = 0; b < h.spec.w; ++b, ++pos)
      if (c.bit(b)) bytes[pos >> 3] |= std::uint8_t(1u << (pos & 7));
  }
  return bytes;
}

HashFunction unpack_coeffs(int n, int m, int k, const FieldSpec& spec,
                           const std::vector<std::uint8_t>& bytes) {
  int total_bits = k * spec.w;
  if (static_cast<int>(bytes.size()) != (total_bits + 7) / 8)
    throw std::invalid_argument("packed coefficient block has wrong size");
  HashFunction h;
  h.n = n;
  h.m = m;
  h.k = k;
  h.spec = spec;
  h.coeffs.assign(k, FieldElem{});
  int pos = 0;
  for (int i = 0; i < k; ++i) {
    for (int b = 0; b < spec.w; ++b, ++pos)
      if ((bytes[pos >> 3] >> (pos & 7)) & 1) h.coeffs[i].set_bit(b);
  }
  return h;
}

std::vector<bool> coeff_bits(const HashFunction& h) {
  std::vector<bool> bits;
  bits.reserve(h.k * h.spec.w);
  for (const FieldElem& c : h.coeffs)
    for (int b = 0; b < h.spec.w; ++b) bits.push_back(c.bit(b));
  return bits;
}

HashFunction hash_from_bits(int n, int m, int k, const std::vector<bool>& bits,
                            std::size_t offset) {
  HashFunction h;
  h.n = n;
  h.m = m;
  h.k = k;
  h.spec = FieldSpec::for_width(std::max(n, m));
  h.coeffs.assign(k, FieldElem{});
  for (int i = 0; i < k; ++i)
    for (int b = 0; b < h.spec.w; ++b)
      if (bits.at(offset + i * h.spec.w + b)) h.coeffs[i].set_bit(b);
  return h;
}

}  // namespace auditcount
