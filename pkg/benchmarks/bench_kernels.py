"""Compiled kernels vs numpy fallback, plus thread scaling of the layered engine.

    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import os
import time

from signsum import _backend
from signsum.brute import g_brute
from signsum.core import weight_table_random
from signsum.dp import g_table, g_top


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    sizes = [10, 14, 18] if args.quick else [12, 16, 20, 22]
    backends = sorted(_backend.BACKENDS)
    print(f"backends: {backends}; cpus: {os.cpu_count()}")
    print(f"{'case':<28}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")

    cases = []
    for n in sizes:
        for mode in ("uniform", "pm_one"):
            f = weight_table_random(n, n, mode)
            cases.append((f"g_top n={n} {mode}", lambda f=f: g_top(f, threads=1)))
    for n in sizes[:2]:
        f = weight_table_random(n, n, "uniform")
        cases.append((f"g_table n={n}", lambda f=f: g_table(f).top))
    for n in (7, 8):
        f = weight_table_random(n, n, "uniform")
        cases.append((f"g_brute n={n}", lambda f=f: g_brute(f)))

    for name, fn in cases:
        row, results = {}, []
        for b in backends:
            with _backend.use_backend(b):
                row[b], out = best_of(fn, args.repeat)
                results.append(out)
        assert all(abs(r - results[0]) <= 1e-9 * max(1.0, abs(results[0])) for r in results), name
        speed = row["python"] / row["compiled"] if "compiled" in row else float("nan")
        print(f"{name:<28}" + "".join(f"{row[b] * 1e3:>12.2f}ms" for b in backends) + f"{speed:>9.1f}x")

    if "compiled" in _backend.BACKENDS:
        n = 20 if args.quick else 24
        f = weight_table_random(n, 1, "uniform")
        print(f"\nlayered engine, n={n}, compiled backend")
        base = None
        for threads in sorted({1, 2, 4, os.cpu_count() or 1}):
            t, g = best_of(lambda: g_top(f, threads=threads), args.repeat)
            base = base or t
            print(f"  threads={threads:<3} {t:8.3f}s  speedup {base / t:5.2f}x  g={g!r}")


if __name__ == "__main__":
    main()
