"""Subset recursion for ``g``.

``g(T) = f(T) * sum_{a in T} (-1)**#{t in T: t > a} * g(T - {a})`` with
``g(empty) = 1``.  Two engines evaluate it:

* :func:`g_table` fills all ``2**n`` entries in increasing mask order
  (every ``T - {a}`` is numerically smaller than ``T``);
* :func:`g_top` keeps only two popcount levels and returns ``g(N)``.

Weights in ``{-1, 0, 1}`` run in exact integer arithmetic, anything else in
doubles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import (
    MAX_N,
    MAX_N_TABLE,
    WeightFunction,
    check_n,
    full_mask,
    insertion_sign,
    elements_of,
    sqrt_n_pow_n,
)

MAX_N_PARTIALS = 20


def _resolve_n(f: WeightFunction, n: int | None, limit: int) -> int:
    if n is None:
        n = f.n
    n = check_n(n, limit)
    if n != f.n:
        raise ValueError(f"weight function is defined on n={f.n}, asked for n={n}")
    return n


@dataclass(frozen=True)
class GTable:
    """``g`` on every subset; ``g[mask]`` is an int (exact) or float."""

    n: int
    g: np.ndarray
    exact: bool

    def __getitem__(self, T) -> int | float:
        v = self.g[int(T)]
        return int(v) if self.exact else float(v)

    def __len__(self) -> int:
        return self.g.size

    @property
    def top(self) -> int | float:
        return self[full_mask(self.n)]

    def recursion_residual(self, f: WeightFunction, T: int) -> float:
        """How far entry ``T`` is from satisfying the recursion."""
        T = int(T)
        rhs = sum(insertion_sign(T, a) * self[T & ~(1 << (a - 1))] for a in elements_of(T))
        return abs(self[T] - f(T) * rhs)


def g_table(f: WeightFunction, n: int | None = None) -> GTable:
    """``g`` on all ``2**n`` subsets (``n <= 26``)."""
    n = _resolve_n(f, n, MAX_N_TABLE)
    g = _backend.kernels().g_table(f.table(), n, f.exact)
    return GTable(n, g, f.exact)


def g_top(f: WeightFunction, n: int | None = None, threads: int | None = None) -> int | float:
    """``g(N)`` with memory proportional to the widest level (``n <= 30``).

    Entries within a level are independent; ``threads`` (default
    ``SIGNSUM_NUM_THREADS`` or 1) spreads them over OpenMP workers in the
    compiled backend.  The result does not depend on the thread count.
    """
    n = _resolve_n(f, n, MAX_N)
    threads = _backend.default_threads() if threads is None else max(1, int(threads))
    return _backend.kernels().g_top(lambda k, masks: f.values(masks), n, f.exact, threads)


def g_partials(f: WeightFunction, n: int | None = None) -> tuple[int | float, np.ndarray]:
    """``g(N)`` and its partial derivative in every table entry ``f(S)``.

    ``g(N)`` is affine in each ``f(S)``, so setting ``f(S) = v`` gives
    ``g(N) + (v - f(S)) * partial[S]``.
    """
    n = _resolve_n(f, n, MAX_N_PARTIALS)
    return _backend.kernels().g_partials(f.table(), n, f.exact)


def bound_check(f: WeightFunction, n: int | None = None, method: str = "top") -> dict:
    """Compare ``|g(N)|`` against ``sqrt(n)**n``."""
    n = _resolve_n(f, n, MAX_N)
    if method == "top":
        value = g_top(f, n)
    elif method == "table":
        value = g_table(f, n).top
    else:
        raise ValueError(f"unknown method {method!r}")
    return bound_report(value, n)


def bound_report(value: int | float, n: int) -> dict:
    bound = sqrt_n_pow_n(n)
    ratio = abs(value) / bound
    return {
        "g_value": value,
        "bound": bound,
        "ratio": ratio,
        "ok": abs(value) <= bound * (1 + 1e-12),
    }


__all__ = ["GTable", "g_table", "g_top", "g_partials", "bound_check", "bound_report"]
