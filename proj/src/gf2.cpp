#include "auditcount/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace auditcount {

namespace detail {
extern const std::array<std::uint64_t, 256> kModulusTails;
}

FieldSpec FieldSpec::for_width(int w) {
  if (w < 1 || w > 256) throw std::invalid_argument("field degree out of range");
  FieldSpec s;
  s.w = w;
  s.modulus[0] = detail::kModulusTails[w - 1];
  s.modulus[w >> 6] |= std::uint64_t{1} << (w & 63);
  return s;
}

std::string FieldSpec::modulus_hex() const {
  return bits_to_hex(std::span<const std::uint64_t>(modulus.data(), 5), w + 1);
}

FieldSpec FieldSpec::from_modulus_hex(int w, const std::string& hex) {
  if (w < 1 || w > 256) throw std::invalid_argument("field degree out of range");
  FieldSpec s;
  s.w = w;
  auto words = hex_to_bits(hex, w + 1);
  std::copy(words.begin(), words.end(), s.modulus.begin());
  if (!((s.modulus[w >> 6] >> (w & 63)) & 1))
    throw std::invalid_argument("modulus top bit not set");
  return s;
}

FieldElem gf2_add(const FieldElem& a, const FieldElem& b) {
  FieldElem r;
  for (int i = 0; i < 4; ++i) r.limbs[i] = a.limbs[i] ^ b.limbs[i];
  return r;
}

namespace {

// 512-bit scratch for products before reduction.
struct Wide {
  std::array<std::uint64_t, 8> limbs{};
  bool bit(int i) const { return (limbs[i >> 6] >> (i & 63)) & 1; }
  void flip_bit(int i) { limbs[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  int top_bit() const {
    for (int wi = 7; wi >= 0; --wi)
      if (limbs[wi]) return wi * 64 + 63 - std::countl_zero(limbs[wi]);
    return -1;
  }
  void xor_shifted(std::span<const std::uint64_t> src, int nwords, int shift) {
    int ws = shift >> 6, bs = shift & 63;
    for (int i = 0; i < nwords; ++i) {
      std::uint64_t v = src[i];
      if (!v) continue;
      limbs[i + ws] ^= v << bs;
      if (bs && i + ws + 1 < 8) limbs[i + ws + 1] ^= v >> (64 - bs);
    }
  }
};

Wide clmul(const FieldElem& a, const FieldElem& b, int w) {
  Wide r;
  int nwords = (w + 63) / 64;
  for (int i = 0; i < w; ++i) {
    if (!b.bit(i)) continue;
    r.xor_shifted(std::span<const std::uint64_t>(a.limbs.data(), 4), nwords, i);
  }
  return r;
}

FieldElem reduce(Wide v, const FieldSpec& spec) {
  int top;
  while ((top = v.top_bit()) >= spec.w) {
    v.xor_shifted(std::span<const std::uint64_t>(spec.modulus.data(), 5),
                  (spec.w + 64) / 64, top - spec.w);
  }
  FieldElem r;
  for (int i = 0; i < 4; ++i) r.limbs[i] = v.limbs[i];
  return r;
}

// Fast path for w <= 63: shift-and-xor with 64-bit words.
std::uint64_t mul_small(std::uint64_t a, std::uint64_t b, std::uint64_t mod,
                        int w) {
  std::uint64_t r = 0;
  std::uint64_t top = std::uint64_t{1} << w;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= mod;
  }
  return r;
}

}  // namespace

FieldElem gf2_mul(const FieldSpec& spec, const FieldElem& a,
                  const FieldElem& b) {
  if (spec.w < 64) {
    std::uint64_t mod = spec.modulus[0] | (std::uint64_t{1} << spec.w);
    return FieldElem::from_u64(mul_small(a.limbs[0], b.limbs[0], mod, spec.w));
  }
  return reduce(clmul(a, b, spec.w), spec);
}

FieldElem gf2_pow(const FieldSpec& spec, FieldElem a, std::uint64_t e) {
  FieldElem r = FieldElem::from_u64(1);
  while (e) {
    if (e & 1) r = gf2_mul(spec, r, a);
    a = gf2_mul(spec, a, a);
    e >>= 1;
  }
  return r;
}

FieldElem gf2_inv(const FieldSpec& spec, const FieldElem& a) {
  // a^(2^w - 2) = prod_{i=1..w-1} a^(2^i), built from a square chain.
  FieldElem r = FieldElem::from_u64(1);
  FieldElem s = a;
  for (int i = 1; i < spec.w; ++i) {
    s = gf2_mul(spec, s, s);
    r = gf2_mul(spec, r, s);
  }
  return r;
}

FieldElem gf2_truncate(FieldElem a, int m) {
  FieldElem r;
  for (int wi = 0; wi < 4; ++wi) {
    int lo = wi * 64;
    if (m <= lo) break;
    std::uint64_t mask = (m - lo >= 64) ? ~std::uint64_t{0}
                                        : ((std::uint64_t{1} << (m - lo)) - 1);
    r.limbs[wi] = a.limbs[wi] & mask;
  }
  return r;
}

int BitPoly::degree() const {
  for (int wi = static_cast<int>(words.size()) - 1; wi >= 0; --wi)
    if (words[wi]) return wi * 64 + 63 - std::countl_zero(words[wi]);
  return -1;
}

bool BitPoly::bit(int i) const {
  int wi = i >> 6;
  if (wi >= static_cast<int>(words.size())) return false;
  return (words[wi] >> (i & 63)) & 1;
}

BitPoly BitPoly::from_u64(std::uint64_t v) { return BitPoly{{v}}; }

namespace {

void ptrim(BitPoly& p) {
  while (!p.words.empty() && p.words.back() == 0) p.words.pop_back();
}

BitPoly pxor_shift(const BitPoly& acc, const BitPoly& src, int shift) {
  BitPoly r = acc;
  int ws = shift >> 6, bs = shift & 63;
  std::size_t need = src.words.size() + ws + 1;
  if (r.words.size() < need) r.words.resize(need, 0);
  for (std::size_t i = 0; i < src.words.size(); ++i) {
    std::uint64_t v = src.words[i];
    if (!v) continue;
    r.words[i + ws] ^= v << bs;
    if (bs) r.words[i + ws + 1] ^= v >> (64 - bs);
  }
  ptrim(r);
  return r;
}

BitPoly pmul(const BitPoly& a, const BitPoly& b) {
  BitPoly r;
  int db = b.degree();
  for (int i = 0; i <= db; ++i)
    if (b.bit(i)) r = pxor_shift(r, a, i);
  return r;
}

BitPoly pmod(BitPoly a, const BitPoly& m) {
  int dm = m.degree();
  int da;
  while ((da = a.degree()) >= dm) {
    int shift = da - dm, ws = shift >> 6, bs = shift & 63;
    for (std::size_t i = 0; i < m.words.size(); ++i) {
      std::uint64_t v = m.words[i];
      if (!v) continue;
      a.words[i + ws] ^= v << bs;
      if (bs && i + ws + 1 < a.words.size()) a.words[i + ws + 1] ^= v >> (64 - bs);
    }
    ptrim(a);
  }
  return a;
}

BitPoly pgcd(BitPoly a, BitPoly b) {
  while (b.degree() >= 0) {
    BitPoly r = pmod(a, b);
    a = b;
    b = r;
  }
  return a;
}

BitPoly pow_x_2k(int k, const BitPoly& mod) {
  BitPoly r = BitPoly::from_u64(2);  // x
  for (int i = 0; i < k; ++i) r = pmod(pmul(r, r), mod);
  return r;
}

std::vector<int> prime_factors(int n) {
  std::vector<int> fs;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      fs.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

}  // namespace

bool verify_irreducible(const BitPoly& p) {
  int w = p.degree();
  if (w < 1) return false;
  if (w == 1) return true;
  BitPoly x = BitPoly::from_u64(2);
  BitPoly xw = pow_x_2k(w, p);
  ptrim(xw);
  if (!(xw.degree() == 1 && xw.words.size() == 1 && xw.words[0] == 2))
    return false;
  for (int q : prime_factors(w)) {
    BitPoly t = pow_x_2k(w / q, p);
    // t - x over GF(2) is t xor x
    if (t.words.empty()) t.words.push_back(0);
    t.words[0] ^= 2;
    ptrim(t);
    BitPoly g = pgcd(p, t);
    if (g.degree() != 0) return false;
  }
  return true;
}

std::string bits_to_hex(std::span<const std::uint64_t> words, int nbits) {
  int nibbles = (nbits + 3) / 4;
  std::string out(nibbles, '0');
  for (int i = 0; i < nibbles; ++i) {
    int lo = i * 4;
    int wi = lo >> 6, bi = lo & 63;
    std::uint64_t nib =
        (wi < static_cast<int>(words.size())) ? (words[wi] >> bi) & 0xf : 0;
    if (bi > 60 && wi + 1 < static_cast<int>(words.size()))
      nib |= (words[wi + 1] << (64 - bi)) & 0xf;
    out[nibbles - 1 - i] = "0123456789abcdef"[nib];
  }
  return out;
}

std::vector<std::uint64_t> hex_to_bits(const std::string& hex, int nbits) {
  std::vector<std::uint64_t> words((nbits + 63) / 64, 0);
  int nibbles = (nbits + 3) / 4;
  if (static_cast<int>(hex.size()) != nibbles)
    throw std::invalid_argument("hex length mismatch");
  for (int i = 0; i < nibbles; ++i) {
    char c = hex[nibbles - 1 - i];
    std::uint64_t nib;
    if (c >= '0' && c <= '9') nib = c - '0';
    else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
    else throw std::invalid_argument("bad hex digit");
    int lo = i * 4;
    int wi = lo >> 6, bi = lo & 63;
    words[wi] |= nib << bi;
    if (bi > 60 && wi + 1 < static_cast<int>(words.size()))
      words[wi + 1] |= nib >> (64 - bi);
  }
  // reject set bits beyond nbits
  for (int i = nbits; i < nibbles * 4; ++i) {
    if ((words[i >> 6] >> (i & 63)) & 1)
      throw std::invalid_argument("hex value wider than declared bit width");
  }
  return words;
}

}  // namespace auditcount
