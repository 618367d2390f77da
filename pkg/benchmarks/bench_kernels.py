"""Compare the compiled and pure-Python oracle kernels.

Run: python3 benchmarks/bench_kernels.py [--vars 8 12 16 20] [--repeat 3]

Unsatisfiable instances are used so that both scans cover all 2**n
candidates (the compiled scan exits early on a hit).
"""

import argparse
import time

from covsat import kernels
from covsat import _kernels_py as pure
from covsat.cnf import CnfFormula
from covsat.decomposition import decomposition_of_cnf


def unsat_formula(n: int) -> CnfFormula:
    """Every assignment of x1..xn falsifies exactly one of 2**k clauses over the first k vars."""
    k = min(n, 4)
    clauses = []
    for mask in range(1 << k):
        clauses.append([-(i + 1) if mask >> i & 1 else i + 1 for i in range(k)])
    clauses += [[v] for v in range(k + 1, n + 1)]
    return CnfFormula.from_lists(n, clauses)


def sat_rows(f: CnfFormula):
    n = f.num_vars
    pos, neg = [], []
    for c in f.clauses:
        pos.append(sum(1 << (n - l.var) for l in c.literals if l.sign))
        neg.append(sum(1 << (n - l.var) for l in c.literals if not l.sign))
    return pos, neg


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--vars", type=int, nargs="+", default=[8, 12, 16, 20])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    compiled = kernels.compiled_kernels
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<10} {'n':>3} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.vars:
        f = unsat_formula(n)
        pos, neg = sat_rows(f)
        d = decomposition_of_cnf(f)
        c1 = [p.pos_mask for p in d.pairs]
        c0 = [p.neg_mask for p in d.pairs]
        cases = [
            ("sat", lambda m: m.first_satisfying(n, pos, neg)),
            ("covering", lambda m: m.first_covering(n, d.ground, c1, c0)),
        ]
        for name, call in cases:
            t_py = best_of(lambda: call(pure), args.repeat)
            if compiled is None:
                print(f"{name:<10} {n:>3} {t_py:>10.4f} {'n/a':>10} {'n/a':>8}")
                continue
            assert call(pure) == call(compiled)
            t_c = best_of(lambda: call(compiled), args.repeat)
            print(f"{name:<10} {n:>3} {t_py:>10.4f} {t_c:>10.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
