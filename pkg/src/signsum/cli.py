"""Command line interface.

Every report is one line of JSON on stdout; diagnostics go to stderr.

Exit codes: 0 success, 1 cross-method disagreement, 2 usage or size error,
3 bound breach, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__, _backend
from .brute import MAX_BRUTE, epsilon_sum_brute, g_brute
from .core import (
    MAX_N,
    WEIGHT_MODES,
    DomainError,
    SizeError,
    WeightFileError,
    WeightTable,
    bound_exact,
    weight_table_random,
)
from .dp import bound_report, g_table, g_top
from .fermion import PrefixProblem, fermion_weight, proposition_check
from .search import BoundBreach, exhaustive_max, local_search_max
from .wedge import MAX_N_OPERATOR, g_operator

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_BREACH, EXIT_IO = 0, 1, 2, 3, 4

REAL_TOL = 1e-9
BRUTE_XVAL_MAX = 8

METHOD_LIMITS = {"brute": MAX_BRUTE, "dp": MAX_N, "operator": MAX_N_OPERATOR}


class _Usage(Exception):
    pass


def _emit(report: dict) -> None:
    print(json.dumps(report, default=_jsonable))


def _jsonable(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _load_instance(args):
    """Returns ``(weight_function, problem_or_None)``."""
    if args.weight and args.fermion:
        raise _Usage("give at most one of --weight and --fermion")
    if args.weight:
        return WeightTable.load(args.weight), None
    if args.fermion:
        p = PrefixProblem.load(args.fermion)
        return fermion_weight(p), p
    if args.n is None:
        raise _Usage("give --weight, --fermion, or --n for a constant table")
    if not 1 <= args.n <= MAX_N:
        raise SizeError(f"n={args.n} outside the supported range 1..{MAX_N}")
    if args.n > 26:
        raise SizeError("constant tables are materialised; use n <= 26")
    return WeightTable.constant(args.n, args.constant), None


def _evaluate(method: str, f, problem):
    limit = METHOD_LIMITS[method]
    if f.n > limit:
        raise SizeError(f"method {method} is limited to n <= {limit}, got n={f.n}")
    if method == "brute":
        return epsilon_sum_brute(problem) if problem is not None else g_brute(f)
    if method == "dp":
        return g_top(f)
    return g_operator(f)


def _pair_tolerance(a, b) -> float:
    return 0.0 if isinstance(a, int) and isinstance(b, int) else REAL_TOL


def cmd_gen_weight(args) -> int:
    table = weight_table_random(args.n, args.seed, args.mode)
    text = table.save(args.out)
    digest = hashlib.sha256((text + "\n").encode()).hexdigest()
    _emit({"path": args.out, "n": table.n, "mode": args.mode, "seed": args.seed, "sha256": digest})
    return EXIT_OK


def cmd_eval(args) -> int:
    f, problem = _load_instance(args)
    n = f.n
    if args.method != "all":
        t0 = time.perf_counter()
        g = _evaluate(args.method, f, problem)
        elapsed = (time.perf_counter() - t0) * 1e3
        _emit({"g": g, "method": args.method, "n": n, "elapsed_ms": elapsed})
        return EXIT_OK
    values, timings, skipped = {}, {}, []
    for method in ("brute", "dp", "operator"):
        if n > METHOD_LIMITS[method]:
            skipped.append(method)
            continue
        t0 = time.perf_counter()
        values[method] = _evaluate(method, f, problem)
        timings[method] = (time.perf_counter() - t0) * 1e3
    names = list(values)
    diffs, ok = {}, True
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            d = abs(values[a] - values[b])
            diffs[f"{a}-{b}"] = d
            ok &= d <= _pair_tolerance(values[a], values[b])
    _emit(
        {
            "g": values["dp"],
            "method": "all",
            "n": n,
            "values": values,
            "diffs": diffs,
            "skipped": skipped,
            "agree": ok,
            "elapsed_ms": sum(timings.values()),
        }
    )
    if not ok:
        print("methods disagree beyond tolerance", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_check_bound(args) -> int:
    f, problem = _load_instance(args)
    if problem is not None:
        if args.method == "operator":
            raise _Usage("the operator pipeline works in floating point; use dp or brute for --fermion")
        if problem.n > METHOD_LIMITS[args.method]:
            raise SizeError(f"method {args.method} is limited to n <= {METHOD_LIMITS[args.method]}")
        report = proposition_check(problem, method=args.method)
    else:
        report = bound_report(_evaluate(args.method, f, None), f.n)
    report.update({"n": f.n, "method": args.method, "bound_exact": bound_exact(f.n)})
    _emit(report)
    if not report["ok"]:
        print("bound breach: this indicates an engine bug", file=sys.stderr)
        return EXIT_BREACH
    return EXIT_OK


def _trial_seed(seed: int, n: int, mode: str, trial: int) -> int:
    ss = np.random.SeedSequence([seed, n, WEIGHT_MODES.index(mode), trial])
    return int(ss.generate_state(1, np.uint64)[0])


def cross_validate(n_max: int, trials: int, seed: int) -> dict:
    """Random tables through every applicable evaluator; max discrepancies."""
    if not 1 <= n_max <= MAX_N_OPERATOR:
        raise SizeError(f"--n-max must be in 1..{MAX_N_OPERATOR}")
    rows, overall, ok = [], {}, True
    for n in range(1, n_max + 1):
        for mode in WEIGHT_MODES:
            worst: dict[str, float] = {}
            for trial in range(trials):
                f = weight_table_random(n, _trial_seed(seed, n, mode, trial), mode)
                table = g_table(f)
                values = {"table": table.top, "top": g_top(f), "operator": g_operator(f)}
                if n <= BRUTE_XVAL_MAX:
                    # every subset, not only N
                    d = max(abs(table[T] - g_brute(f, T)) for T in range(1 << n))
                    worst["brute-table"] = max(worst.get("brute-table", 0.0), d)
                    values["brute"] = g_brute(f)
                names = sorted(values)
                for i, a in enumerate(names):
                    for b in names[i + 1 :]:
                        key = f"{a}-{b}"
                        d = abs(values[a] - values[b])
                        worst[key] = max(worst.get(key, 0.0), d)
                        ok &= d <= _pair_tolerance(values[a], values[b])
            exact = mode != "uniform"
            if "brute-table" in worst:
                ok &= worst["brute-table"] <= (0.0 if exact else REAL_TOL)
            rows.append({"n": n, "mode": mode, "trials": trials, "max_diff": dict(sorted(worst.items()))})
            for k, v in worst.items():
                overall[k] = max(overall.get(k, 0.0), v)
    return {
        "n_max": n_max,
        "trials": trials,
        "seed": seed,
        "rows": rows,
        "max_diff": dict(sorted(overall.items())),
        "ok": bool(ok),
    }


def cmd_cross_validate(args) -> int:
    summary = cross_validate(args.n_max, args.trials, args.seed)
    _emit(summary)
    return EXIT_OK if summary["ok"] else EXIT_DISAGREE


def cmd_search(args) -> int:
    if args.exhaustive:
        report = exhaustive_max(args.n)
    else:
        report = local_search_max(args.n, args.seed, args.restarts, args.max_sweeps)
    _emit(report)
    return EXIT_OK


def _add_instance_args(p) -> None:
    p.add_argument("--weight", metavar="PATH", help="weight table JSON file")
    p.add_argument("--fermion", metavar="PATH", help="prefix problem JSON file")
    p.add_argument("--n", type=int, help="size of a constant table (when no file is given)")
    p.add_argument("--constant", type=float, default=1.0, help="value of the constant table (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signsum", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--backend", choices=sorted(_backend.BACKENDS), help="kernel backend (default: compiled if built)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-weight", help="write a random weight table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=WEIGHT_MODES, default="uniform")
    p.add_argument("--out", required=True, metavar="PATH")
    p.set_defaults(func=cmd_gen_weight)

    p = sub.add_parser("eval", help="evaluate g(N)")
    _add_instance_args(p)
    p.add_argument("--method", choices=("brute", "dp", "operator", "all"), default="dp")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-bound", help="compare |g(N)| with sqrt(n)**n")
    _add_instance_args(p)
    p.add_argument("--method", choices=("brute", "dp", "operator"), default="dp")
    p.set_defaults(func=cmd_check_bound)

    p = sub.add_parser("cross-validate", help="run random tables through all evaluators")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cross_validate)

    p = sub.add_parser("search", help="search for tables with large |g(N)|")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--max-sweeps", type=int, default=1000)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.backend:
            _backend.set_backend(args.backend)
        return args.func(args)
    except (WeightFileError, OSError) as exc:
        print(f"signsum: {exc}", file=sys.stderr)
        return EXIT_IO
    except BoundBreach as exc:
        print(f"signsum: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (_Usage, SizeError, DomainError, ValueError) as exc:
        print(f"signsum: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
