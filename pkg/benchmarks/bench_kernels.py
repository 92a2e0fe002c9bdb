"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]

Inputs are real structures from the library: symmetric inverse monoids for
the semigroup kernels and truncated path categories for the category ones.
"""
import argparse
import json
import timeit

import numpy as np

from rswork import _kernels_py as py
from rswork.cat import graph_category
from rswork.rsem import symmetric_inverse_monoid

try:
    from rswork import _ckernels as ck
except ImportError:
    ck = None


def cases():
    out = []
    for pts in ([1, 2, 3], [1, 2, 3, 4]):
        S = symmetric_inverse_monoid(pts)
        T = np.ascontiguousarray(S.table, dtype=np.int64)
        lam = np.ascontiguousarray(S.lam, dtype=np.int64)
        rho = np.ascontiguousarray(S.rho, dtype=np.int64)
        leq = np.ascontiguousarray(py.natural_leq_matrix(T, lam))
        tag = f"I_{len(pts)} (n={S.n})"
        out += [
            ("associativity", tag, "find_nonassociative", (T,)),
            ("natural order", tag, "natural_leq_matrix", (T, lam)),
            ("left ample", tag, "find_ample_violation", (T, lam)),
            ("order split", tag, "find_order_split_violation", (T, lam, rho, leq)),
        ]
    for m, N in ((2, 5), (3, 4)):
        C = graph_category(["v"], [(f"x{i}", "v", "v") for i in range(1, m + 1)], N)
        comp = np.ascontiguousarray(C.comp, dtype=np.int64)
        tag = f"{m} loops, N={N} (n={C.n})"
        out += [
            ("category assoc", tag, "find_category_assoc_violation", (comp,)),
            ("left cancel", tag, "find_left_cancel_violation", (comp,)),
        ]
        xs, ys, zs = (np.ascontiguousarray(a, dtype=np.int64) for a in C.factorizations)
        rng = np.random.default_rng(0)
        f = rng.standard_normal(C.n) + 0j
        g = rng.standard_normal(C.n) + 0j
        out.append(("convolution", tag, "conv_accumulate",
                    (xs, ys, zs, f, g, np.zeros(C.n, complex))))
    return out


def best_time(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for kernel, size, fname, fargs in cases():
        t_py = best_time(getattr(py, fname), fargs, args.repeat)
        t_c = best_time(getattr(ck, fname), fargs, args.repeat) if ck else None
        rows.append({"kernel": kernel, "input": size, "python_s": t_py, "compiled_s": t_c,
                     "speedup": t_py / t_c if t_c else None})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    if ck is None:
        print("compiled kernels not built; showing the Python fallback only")
    print(f"{'kernel':<16} {'input':<24} {'python':>11} {'compiled':>11} {'speedup':>8}")
    for r in rows:
        c = f"{r['compiled_s'] * 1e3:9.3f}ms" if r["compiled_s"] else "          -"
        s = f"{r['speedup']:7.1f}x" if r["speedup"] else "       -"
        print(f"{r['kernel']:<16} {r['input']:<24} {r['python_s'] * 1e3:9.3f}ms {c} {s}")


if __name__ == "__main__":
    main()
