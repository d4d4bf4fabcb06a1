#!/usr/bin/env python3
"""Generate the frozen test corpus under tests/data/.

Forty formulas with n in [4,10] and exact counts in [1,32]: a mix of random
3-CNF (rejection-sampled into the count range) and structured families.
Counts in the manifest come from the plain truth-table sweep below, which is
deliberately independent of the C++ library.

The generated files are committed; rerunning this script must reproduce them
byte for byte (fixed seed).
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "tests" / "data"


def count_models(n: int, clauses: list[list[int]]) -> int:
    total = 0
    for bits in range(1 << n):
        ok = True
        for cl in clauses:
            sat = False
            for lit in cl:
                v = abs(lit) - 1
                val = (bits >> v) & 1
                if (lit > 0) == (val == 1):
                    sat = True
                    break
            if not sat:
                ok = False
                break
        if ok:
            total += 1
    return total


def write_cnf(path: Path, n: int, clauses: list[list[int]], comment: str) -> None:
    lines = [f"c {comment}", f"p cnf {n} {len(clauses)}"]
    for cl in clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    path.write_text("\n".join(lines) + "\n")


def forced_free(n: int, free: int) -> list[list[int]]:
    """Unit-force all but `free` variables: count = 2^free."""
    clauses = []
    for v in range(free + 1, n + 1):
        clauses.append([v if v % 2 == 0 else -v])
    return clauses


def at_most_one(n: int, k: int) -> list[list[int]]:
    """At-most-one over x1..xk, rest forced false: count = k+1."""
    clauses = [[-i, -j] for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    for v in range(k + 1, n + 1):
        clauses.append([-v])
    return clauses


def chain(n: int, k: int) -> list[list[int]]:
    """Implication chain x1 -> x2 -> ... -> xk, rest forced: count = k+1."""
    clauses = [[-i, i + 1] for i in range(1, k)]
    for v in range(k + 1, n + 1):
        clauses.append([v])
    return clauses


def random_3cnf(rng: random.Random, n: int, m: int) -> list[list[int]]:
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append([v if rng.random() < 0.5 else -v for v in sorted(vs)])
    return clauses


def main() -> None:
    rng = random.Random(20240811)
    corpus_dir = ROOT / "corpus"
    bench_dir = ROOT / "bench"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    bench_dir.mkdir(parents=True, exist_ok=True)

    entries = []

    def add(name: str, n: int, clauses: list[list[int]], kind: str, lo=1, hi=32):
        cnt = count_models(n, clauses)
        assert lo <= cnt <= hi, (name, cnt)
        write_cnf(corpus_dir / f"{name}.cnf", n, clauses, f"{kind} n={n} count={cnt}")
        entries.append({"file": f"{name}.cnf", "n": n, "count": cnt, "kind": kind})

    # Structured instances.
    add("forced_n4_c16", 4, forced_free(4, 4), "forced")       # tautology over 4 vars
    add("forced_n4_c4", 4, forced_free(4, 2), "forced")
    add("forced_n5_c8", 5, forced_free(5, 3), "forced")
    add("forced_n6_c1", 6, forced_free(6, 0), "forced")
    add("forced_n6_c32", 6, forced_free(6, 5), "forced")
    add("forced_n7_c2", 7, forced_free(7, 1), "forced")
    add("forced_n8_c32", 8, forced_free(8, 5), "forced")
    add("forced_n9_c8", 9, forced_free(9, 3), "forced")
    add("forced_n10_c8", 10, forced_free(10, 3), "forced")
    add("amo_n5_c5", 5, at_most_one(5, 4), "at-most-one")
    add("amo_n6_c7", 6, at_most_one(6, 6), "at-most-one")
    add("amo_n8_c9", 8, at_most_one(8, 8), "at-most-one")
    add("amo_n10_c11", 10, at_most_one(10, 10), "at-most-one")
    add("chain_n6_c7", 6, chain(6, 6), "chain")
    add("chain_n8_c9", 8, chain(8, 8), "chain")
    add("chain_n10_c11", 10, chain(10, 10), "chain")

    # Random 3-CNF, rejection-sampled into a per-n count budget that keeps
    # the amplified solution sets small enough for the brute-force oracle.
    budget = {4: 32, 5: 32, 6: 32, 7: 32, 8: 32, 9: 13, 10: 13}
    plan = [4, 4, 4, 5, 5, 5, 6, 6, 6, 6, 7, 7, 7, 7, 8, 8, 8, 8, 9, 9, 9, 10, 10, 10]
    idx = 0
    for n in plan:
        while True:
            m = rng.randrange(int(1.8 * n), int(3.2 * n))
            clauses = random_3cnf(rng, n, m)
            cnt = count_models(n, clauses)
            if 1 <= cnt <= budget[n]:
                break
        idx += 1
        name = f"rand3_{idx:02d}_n{n}"
        write_cnf(corpus_dir / f"{name}.cnf", n, clauses, f"random-3cnf n={n} count={cnt}")
        entries.append({"file": f"{name}.cnf", "n": n, "count": cnt, "kind": "random-3cnf"})

    assert len(entries) == 40, len(entries)
    (corpus_dir / "manifest.json").write_text(
        json.dumps({"formulas": entries}, indent=1) + "\n"
    )

    # Bench formulas for the audit-complexity table: fixed count 4 so every
    # algorithm exits with a certificate at measurable loop parameters.
    bench_entries = []
    for n in (8, 12, 16):
        clauses = forced_free(n, 2)
        cnt = count_models(n, clauses) if n <= 20 else None
        assert cnt == 4
        name = f"bench_n{n}"
        write_cnf(bench_dir / f"{name}.cnf", n, clauses, f"bench n={n} count=4")
        bench_entries.append({"file": f"{name}.cnf", "n": n, "count": 4})
    (bench_dir / "manifest.json").write_text(
        json.dumps({"formulas": bench_entries}, indent=1) + "\n"
    )

    by_n = {}
    for e in entries:
        by_n.setdefault(e["n"], []).append(e["count"])
    for n in sorted(by_n):
        print(n, sorted(by_n[n]))


if __name__ == "__main__":
    main()
