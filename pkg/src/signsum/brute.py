"""Factorial-time reference evaluators.

These enumerate every permutation and recompute each prefix product from
scratch.  They share no recursion with :mod:`signsum.dp` and serve as the
ground truth for it.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .core import SizeError, WeightFunction, elements_of, full_mask

MAX_BRUTE = 10


def _local_table(f: WeightFunction, T: int) -> np.ndarray:
    """Weights of all subsets of ``T`` re-indexed by position within ``T``."""
    elems = elements_of(T)
    k = len(elems)
    local = np.zeros(1 << k, dtype=np.uint64)
    for i, e in enumerate(elems):
        bit = np.uint64(1 << (e - 1))
        idx = np.arange(1 << k)
        local[(idx >> i) & 1 == 1] |= bit
    vals = np.asarray(f.values(local), dtype=np.float64).copy()
    vals[0] = 0.0
    return vals


def g_brute(f: WeightFunction, T: int | None = None):
    """Signed prefix-product sum over all orderings of ``T`` (default ``N``).

    Returns an ``int`` for exact weights and a ``float`` otherwise;
    ``g_brute(f, 0) == 1``.
    """
    T = full_mask(f.n) if T is None else int(T)
    if T < 0 or T >> f.n:
        raise ValueError(f"mask {T:#x} is not a subset of 1..{f.n}")
    k = T.bit_count()
    if k > MAX_BRUTE:
        raise SizeError(f"brute force is limited to |T| <= {MAX_BRUTE}, got {k}")
    local = _local_table(f, T)
    return _backend.kernels().brute_g(local, k, f.exact)


def epsilon_sum_brute(p) -> int:
    """Sum of ``sign(sigma)`` over permutations whose prefix sums of ``x``
    meet the size-indexed thresholds ``y``; exact comparisons throughout."""
    if p.n > MAX_BRUTE:
        raise SizeError(f"brute force is limited to n <= {MAX_BRUTE}, got {p.n}")
    x, y, _ = p.integer_form()
    bound = sum(abs(v) for v in x) + max(abs(v) for v in y)
    if bound < 1 << 62:
        return _backend.kernels().epsilon_brute(np.array(x, dtype=np.int64), np.array(y, dtype=np.int64))
    # big integers: stay in Python
    return _backend.BACKENDS["python"].epsilon_brute(x, y)
