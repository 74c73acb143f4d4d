"""Search for weight tables with large ``|g(N)|``.

``g(N)`` is affine in every single entry ``f(S)``, so its absolute value is
maximised at a vertex of the box: tables of signs suffice.  Small ``n`` is
exhausted; larger ``n`` uses steepest-ascent single flips with restarts.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .brute import g_brute
from .core import SizeError, WeightTable, check_n, sqrt_n_pow_n
from .dp import g_partials

MAX_N_EXHAUSTIVE = 4
MAX_N_LOCAL = 14


class BoundBreach(RuntimeError):
    """A reported value exceeds sqrt(n)**n, which indicates an engine bug."""


def _guard(n: int, value) -> None:
    if abs(value) > sqrt_n_pow_n(n) * (1 + 1e-12):
        raise BoundBreach(f"bound breach: |g(N)| = {abs(value)} > sqrt({n})**{n} = {sqrt_n_pow_n(n)}")


def _report(n: int, best: int, signs: np.ndarray, **extra) -> dict:
    _guard(n, best)
    bound = sqrt_n_pow_n(n)
    return {
        "n": n,
        "max_abs_g": abs(int(best)),
        "bound": bound,
        "ratio": abs(int(best)) / bound,
        "table": [int(v) for v in signs[1:]],
        **extra,
    }


def exhaustive_max(n: int) -> dict:
    """Exact maximum of ``|g(N)|`` over all sign tables (``n <= 4``).

    Table number ``t`` has ``f(mask) = -1`` exactly when bit ``mask - 1`` of
    ``t`` is set; the reported argmax is the first maximiser in that order.
    """
    n = check_n(n, MAX_N_EXHAUSTIVE)
    size = 1 << n
    kern = _backend.kernels()
    entries = np.arange(1, size)
    table = np.zeros(size)
    best, best_t = -1, 0
    for t in range(1 << (size - 1)):
        table[1:] = 1.0 - 2.0 * ((t >> (entries - 1)) & 1)
        value = abs(int(kern.g_table(table, n, True)[size - 1]))
        if value > best:
            best, best_t = value, t
    signs = np.zeros(size, dtype=np.int64)
    signs[1:] = 1 - 2 * ((best_t >> (entries - 1)) & 1)
    check = g_brute(WeightTable(n, signs))
    if abs(check) != best:
        raise RuntimeError(f"brute force disagrees on the argmax: {check} vs {best}")
    return _report(n, best, signs, tables_evaluated=1 << (size - 1))


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    key = np.array([int(seed) & 0xFFFFFFFFFFFFFFFF, restart], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _ascend(n: int, signs: np.ndarray, max_sweeps: int) -> tuple[int, np.ndarray, int]:
    """Steepest ascent in ``|g(N)|`` by single sign flips.

    Each sweep scores all ``2**n - 1`` flips at once: flipping ``f(S)``
    moves ``g(N)`` by ``-2 f(S) * dg/df(S)``.  Ties go to the lowest mask.
    """
    signs = signs.copy()
    sweeps = 0
    while sweeps < max_sweeps:
        g, part = g_partials(WeightTable(n, signs))
        sweeps += 1
        cand = np.abs(g - 2 * signs * part)
        cand[0] = -1
        best = int(np.argmax(cand))
        if cand[best] <= abs(g):
            break
        signs[best] = -signs[best]
        g = int(g - 2 * (-signs[best]) * part[best])
    return int(g), signs, sweeps


def local_search_max(
    n: int,
    seed: int = 0,
    restarts: int = 16,
    max_sweeps: int = 1000,
    initial: list | None = None,
) -> dict:
    """Best ``|g(N)|`` found by steepest ascent from random sign tables.

    Restart ``r`` starts from signs drawn by a Philox generator keyed on
    ``(seed, r)``, so results do not depend on evaluation order.  Tables in
    ``initial`` are used as extra starting points after the random ones.
    """
    n = check_n(n, MAX_N_LOCAL)
    if restarts < 0 or max_sweeps < 1:
        raise ValueError("restarts must be >= 0 and max_sweeps >= 1")
    size = 1 << n
    starts = []
    for r in range(restarts):
        signs = _restart_rng(seed, r).integers(0, 2, size).astype(np.int64) * 2 - 1
        signs[0] = 0
        starts.append(signs)
    for tab in initial or []:
        vals = np.asarray(tab.table() if isinstance(tab, WeightTable) else tab, dtype=np.float64)
        if vals.shape != (size,) or np.any(np.abs(vals[1:]) != 1):
            raise ValueError("initial tables must hold 2**n entries of +-1 (entry 0 ignored)")
        signs = vals.astype(np.int64)
        signs[0] = 0
        starts.append(signs)
    if not starts:
        raise ValueError("nothing to search: no restarts and no initial tables")

    best_key, best_signs, sweeps_total = None, None, 0
    for r, start in enumerate(starts):
        g, signs, sweeps = _ascend(n, start, max_sweeps)
        sweeps_total += sweeps
        _guard(n, g)
        key = (abs(g), g, -r)
        if best_key is None or key > best_key:
            best_key, best_signs = key, signs
    return _report(n, best_key[0], best_signs, restarts_used=len(starts), sweeps_total=sweeps_total)


def round_to_vertex(f: WeightTable) -> WeightTable:
    """Move every entry to +-1, one at a time, never decreasing ``|g(N)|``.

    With the other entries fixed ``g(N)`` is affine in ``f(S)``, so one of
    the two endpoints is at least as large in absolute value.
    """
    if f.n > MAX_N_LOCAL:
        raise SizeError(f"round_to_vertex is limited to n <= {MAX_N_LOCAL}")
    vals = f.table()
    for S in range(1, 1 << f.n):
        g, part = g_partials(WeightTable(f.n, vals))
        up = g + (1.0 - vals[S]) * part[S]
        down = g + (-1.0 - vals[S]) * part[S]
        vals[S] = 1.0 if abs(up) >= abs(down) else -1.0
    return WeightTable(f.n, vals)
