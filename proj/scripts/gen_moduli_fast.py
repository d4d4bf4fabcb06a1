#!/usr/bin/env python3
"""Fast integer-arithmetic variant of gen_moduli.py (Rabin's test).

Polynomials over GF(2) are encoded as Python ints (bit i = coeff of x^i).
Used to produce the full w in [1,256] table quickly; gen_moduli.py (sympy)
is the slower independent cross-check.
"""

import sys


def pmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def pmod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pmod(a, b)
    return a


def pow_x_2k(k: int, m: int) -> int:
    """x^(2^k) mod m by repeated squaring."""
    r = 2  # the polynomial x
    for _ in range(k):
        r = pmod(pmul(r, r), m)
    return r


def prime_factors(n: int) -> list[int]:
    fs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            fs.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fs.append(n)
    return fs


def is_irreducible(p: int) -> bool:
    w = p.bit_length() - 1
    if w < 1:
        return False
    if w == 1:
        return True
    # Rabin: x^(2^w) == x mod p, and gcd(x^(2^(w/q)) - x, p) == 1 for q | w.
    if pow_x_2k(w, p) != 2:
        return False
    for q in prime_factors(w):
        if pgcd(pow_x_2k(w // q, p) ^ 2, p) != 1:
            return False
    return True


def smallest_irreducible_tail(w: int) -> int:
    top = 1 << w
    for tail in range(top):
        if is_irreducible(top | tail):
            return tail
    raise RuntimeError(w)


def main() -> None:
    tails = []
    for w in range(1, 257):
        tail = smallest_irreducible_tail(w)
        tails.append(tail)
        print(f"w={w:3d} tail=0x{tail:x}", file=sys.stderr)

    print("// Generated by scripts/gen_moduli.py; do not edit by hand.")
    print("// Entry [w-1] holds the low w bits of the modulus for GF(2^w);")
    print("// the leading x^w coefficient is implicit.")
    print()
    print("#include <array>")
    print("#include <cstdint>")
    print()
    print("namespace auditcount::detail {")
    print()
    print("extern const std::array<std::uint64_t, 256> kModulusTails;")
    print("const std::array<std::uint64_t, 256> kModulusTails = {")
    for i in range(0, 256, 8):
        row = ", ".join(f"0x{t:x}" for t in tails[i : i + 8])
        print(f"    {row},")
    print("};")
    print()
    print("}  // namespace auditcount::detail")


if __name__ == "__main__":
    main()
