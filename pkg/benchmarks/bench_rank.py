"""Compare the compiled and pure-Python Bareiss kernels.

Run with ``python3 benchmarks/bench_rank.py``.  Two workloads are timed:
random integer matrices of growing size, and the actual condition matrices
the oracle builds for a few schemes.
"""

from __future__ import annotations

import argparse
import random
import timeit

from glscalc import oracle, rank
from glscalc._rank_py import bareiss_rank as py_kernel
from glscalc.puiseux import BranchGerm
from glscalc.scheme import build_scheme


def random_matrix(rng: random.Random, rows: int, cols: int, rk: int) -> list[list[int]]:
    basis = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rk)]
    out = []
    for _ in range(rows):
        coeffs = [rng.randint(-3, 3) for _ in range(rk)]
        out.append([sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(cols)])
    return out


def condition_matrices() -> list[tuple[str, list[list[int]], int]]:
    cases = [
        ("cusp d=12", [BranchGerm.from_terms(2, [(3, 1)])], 12),
        ("E6 d=14", [BranchGerm.from_terms(3, [(4, 1)])], 14),
        ("3 smooth tangent d=16", [BranchGerm.from_terms(1, [(2, c)]) for c in (1, 2, 3)], 16),
    ]
    out = []
    for name, germs, d in cases:
        X = build_scheme(germs, 4)
        sys_ = oracle.conditions_of(X, d)
        out.append((name, rank.integer_rows(sys_.rows), sys_.ambient))
    return out


def bench(name: str, rows: list[list[int]], cols: int, repeat: int) -> None:
    fast = rank._kernel
    assert fast(rows, cols) == py_kernel(rows, cols)
    t_fast = min(timeit.repeat(lambda: fast(rows, cols), number=1, repeat=repeat))
    t_py = min(timeit.repeat(lambda: py_kernel(rows, cols), number=1, repeat=repeat))
    print(f"{name:28s} {len(rows):4d}x{cols:<4d} {rank.BACKEND:>7s} {t_fast * 1e3:9.2f} ms   python {t_py * 1e3:9.2f} ms   x{t_py / t_fast:5.1f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for n in (20, 40, 80, 120):
        bench(f"random n={n}", random_matrix(rng, n, n, n - n // 4), n, args.repeat)
    for name, rows, cols in condition_matrices():
        bench(name, rows, cols, args.repeat)


if __name__ == "__main__":
    main()
