"""Time the numba and numpy builders of the exterior-basis tables.

    python3 benchmarks/bench_kernels.py --dims 8 10 12 14 --repeat 5

Caches are bypassed so every repetition rebuilds the table.  The first
numba call per signature (compilation, or loading from the on-disk cache)
is reported separately as warm-up.
"""
from __future__ import annotations

import argparse
import time

from hullcoh import _kernels as K

TABLES = {
    "wedge(k,2)": lambda n, k, backend: K.wedge_table.__wrapped__(n, k, 2, backend),
    "ce_action": lambda n, k, backend: K.ce_action_table.__wrapped__(n, k, backend),
    "ce_bracket": lambda n, k, backend: K.ce_bracket_table.__wrapped__(n, k, backend),
}


def same_terms(t1, t2) -> bool:
    # term lists are summed exactly, so only the multiset of rows matters
    return sorted(zip(*[a.tolist() for a in t1])) == sorted(zip(*[a.tolist() for a in t2]))


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--dims", type=int, nargs="+", default=[6, 8, 10, 12])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not K.HAVE_NUMBA:
        raise SystemExit("numba is unavailable (or HULLCOH_NUMBA=0); nothing to compare")

    t0 = time.perf_counter()
    for fn in TABLES.values():
        fn(4, 2, "numba")
    print(f"numba warm-up: {time.perf_counter() - t0:.2f}s")
    print(f"{'table':<11} {'n':>3} {'k':>3} {'entries':>9} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")

    for n in args.dims:
        k = n // 2
        for label, fn in TABLES.items():
            ref = fn(n, k, "numpy")
            got = fn(n, k, "numba")
            assert same_terms(ref, got), f"backends disagree on {label} n={n}"
            t_np = best_of(lambda: fn(n, k, "numpy"), args.repeat)
            t_nb = best_of(lambda: fn(n, k, "numba"), args.repeat)
            print(f"{label:<11} {n:>3} {k:>3} {len(ref[0]):>9} {1e3 * t_np:>10.2f} {1e3 * t_nb:>10.2f} "
                  f"{t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
