"""Time the hot kernels with numba and with the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--check]

Each kernel is run on the same inputs under both paths; the first numba call
(compilation) is excluded.  ``--check`` also asserts that both paths agree.
"""

import argparse
import os
import sys
import time

import numpy as np

from preordgrp import kernels
from preordgrp.algebra.finite import cyclic, direct_product, symmetric


def _inputs():
    g = direct_product(symmetric(4), cyclic(6))  # order 144
    t = g.table
    inv = g.inverse
    n = g.order
    rng = np.random.default_rng(7)
    # a normal subgroup as cone, so the scans run to completion
    cone = g.normal_subgroups[len(g.normal_subgroups) // 2]
    eta = np.arange(n) % 6
    f = np.zeros(n, dtype=np.int64)
    seed = np.zeros(n, dtype=bool)
    seed[rng.choice(n, 3, replace=False)] = True
    seed[0] = True
    # Grothendieck input: the monoid (Z/60, +) with pairs over its elements
    m = 60
    sums = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
    pairs = np.array([(i, j) for i in range(m) for j in range(m)], dtype=np.int64)
    rep = np.arange(m)
    return {
        "assoc_violation": (kernels.assoc_violation, (t,)),
        "subgroup_closure": (kernels.subgroup_closure, (t, seed)),
        "conjugation_closure": (kernels.conjugation_closure, (t, inv, seed)),
        "star_violation": (kernels.star_violation, (t, inv, cone, eta, f)),
        "shs_violation": (kernels.shs_violation, (t, inv, cone, f)),
        "grothendieck_labels": (kernels.grothendieck_labels, (pairs, sums, rep)),
    }


def _time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--check", action="store_true", help="assert numba and numpy results agree")
    args = ap.parse_args()

    cases = _inputs()
    print(f"{'kernel':22s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    ok = True
    for name, (fn, fargs) in cases.items():
        os.environ["PREORDGRP_NUMBA"] = "1"
        fn(*fargs)  # compile
        t_nb, r_nb = _time(fn, fargs, args.repeat)
        os.environ["PREORDGRP_NUMBA"] = "0"
        t_np, r_np = _time(fn, fargs, args.repeat)
        os.environ["PREORDGRP_NUMBA"] = "1"
        agree = _same(r_nb, r_np)
        ok &= agree
        mark = "" if agree else "  MISMATCH"
        print(f"{name:22s} {t_nb * 1e3:10.3f} {t_np * 1e3:10.3f} {t_np / max(t_nb, 1e-9):8.1f}{mark}")
    if args.check and not ok:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
