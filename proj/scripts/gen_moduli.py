#!/usr/bin/env python3
"""Regenerate the embedded irreducible-modulus table (src/gf2_moduli.cpp).

For each degree w in [1, 256] we pick the irreducible polynomial over GF(2)
with the smallest integer encoding (bit i = coefficient of x^i).  The table
stores only the low w bits; the leading x^w term is implicit.  sympy is the
independent check here; the C++ test suite re-verifies every entry with the
library's own irreducibility test.
"""

import sys

from sympy import GF, Poly, Symbol

x = Symbol("x")


def bits_to_poly(mask: int, degree: int) -> Poly:
    coeffs = [(mask >> i) & 1 for i in range(degree, -1, -1)]
    return Poly(coeffs, x, domain=GF(2))


def smallest_irreducible(degree: int) -> int:
    top = 1 << degree
    for tail in range(0, top):
        p = bits_to_poly(top | tail, degree)
        if p.is_irreducible:
            return tail
    raise RuntimeError(f"no irreducible polynomial of degree {degree}?")


def main() -> None:
    tails = []
    for w in range(1, 257):
        tail = smallest_irreducible(w)
        assert tail < (1 << 64), (w, tail)
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
