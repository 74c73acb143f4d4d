"""Pure Python / numpy kernels, used when the compiled module is missing.

Signatures match ``signsum._kernels``.  The full-table and layered engines
are vectorised per popcount level rather than looping over masks; results
are identical, only the traversal differs.  Exact arithmetic uses int64
while ``|T|!`` fits, Python integers beyond that.
"""

from __future__ import annotations

import math

import numpy as np

from .core import sjt_permutations

_INT64_SAFE_N = 20  # 20! < 2**63


def _binom_column(n: int, i: int) -> np.ndarray:
    return np.array([math.comb(b, i) for b in range(n)], dtype=np.int64)


def level_masks(n: int, k: int) -> np.ndarray:
    m = math.comb(n, k)
    if k == 0:
        return np.zeros(1, dtype=np.uint64)
    r = np.arange(m, dtype=np.int64)
    out = np.zeros(m, dtype=np.uint64)
    # colex unranking: peel off the largest element first
    for i in range(k, 0, -1):
        col = _binom_column(n, i)
        b = np.searchsorted(col, r, side="right") - 1
        out |= np.left_shift(np.uint64(1), b.astype(np.uint64))
        r -= col[b]
    return out


def _above_parity(masks: np.ndarray, j: int) -> np.ndarray:
    """1 where an odd number of bits above position ``j`` is set."""
    return np.bitwise_count(masks >> np.uint64(j + 1)).astype(np.int64) & 1


def _exact_dtype(n: int):
    return np.int64 if n <= _INT64_SAFE_N else object


def brute_g(local, k: int, exact: bool):
    if k == 0:
        return 1 if exact else 1.0
    vals = [int(v) for v in local] if exact else [float(v) for v in local]
    total = 0 if exact else 0.0
    for perm, sign in sjt_permutations(k):
        prefix = 0
        prod = 1 if exact else 1.0
        for p in perm:
            prefix |= 1 << p
            prod *= vals[prefix]
        total += sign * prod
    return total


def epsilon_brute(x, y) -> int:
    xs = [int(v) for v in x]
    ys = [int(v) for v in y]
    k = len(xs)
    total = 0
    for perm, sign in sjt_permutations(k):
        s = 0
        for i, p in enumerate(perm):
            s += xs[p]
            if s < ys[i]:
                break
        else:
            total += sign
    return total


def g_table(f, n: int, exact: bool):
    f = np.asarray(f, dtype=np.float64)
    dtype = _exact_dtype(n) if exact else np.float64
    g = np.zeros(1 << n, dtype=dtype)
    fw = f.astype(np.int64).astype(dtype) if exact else f
    g[0] = 1
    for k in range(1, n + 1):
        masks = level_masks(n, k)
        acc = np.zeros(masks.size, dtype=dtype)
        for j in range(n):
            bit = np.uint64(1 << j)
            sel = np.flatnonzero(masks & bit)
            sub = masks[sel]
            sign = 1 - 2 * _above_parity(sub, j)
            acc[sel] += sign.astype(dtype) * g[(sub ^ bit).astype(np.int64)]
        idx = masks.astype(np.int64)
        g[idx] = fw[idx] * acc
    if exact and dtype is object:
        lim = 1 << 63
        for m, v in enumerate(g):
            if not -lim <= v < lim:
                raise OverflowError(f"exact g overflows int64 storage at mask {m}")
        g = g.astype(np.int64)
    return g


def g_top(level_weights, n: int, exact: bool, nthreads: int = 1):
    dtype = _exact_dtype(n) if exact else np.float64
    prev = np.ones(1, dtype=dtype)
    prev_masks = np.zeros(1, dtype=np.uint64)
    for k in range(1, n + 1):
        masks = level_masks(n, k)
        w = np.asarray(level_weights(k, masks))
        if exact:
            if w.size and (w.min() < -1 or w.max() > 1 or np.any(w != np.round(w))):
                raise ValueError("exact backend needs weights in {-1, 0, 1}")
            w = w.astype(np.int64).astype(dtype)
        else:
            w = w.astype(np.float64)
        acc = np.zeros(masks.size, dtype=dtype)
        for j in range(n):
            bit = np.uint64(1 << j)
            sel = np.flatnonzero(masks & bit)
            sub = masks[sel]
            sign = 1 - 2 * _above_parity(sub, j)
            src = np.searchsorted(prev_masks, sub ^ bit)
            acc[sel] += sign.astype(dtype) * prev[src]
        prev = w * acc
        prev_masks = masks
    return int(prev[0]) if exact else float(prev[0])


def g_partials(f, n: int, exact: bool):
    f = np.asarray(f, dtype=np.float64)
    dtype = np.int64 if exact else np.float64
    fw = f.astype(np.int64) if exact else f
    size = 1 << n
    fwd = np.zeros(size, dtype=dtype)
    pre = np.zeros(size, dtype=dtype)
    back = np.zeros(size, dtype=dtype)
    fwd[0] = 1
    levels = [level_masks(n, k).astype(np.int64) for k in range(n + 1)]
    for k in range(1, n + 1):
        masks = levels[k]
        acc = np.zeros(masks.size, dtype=dtype)
        for j in range(n):
            sel = np.flatnonzero(masks & (1 << j))
            sub = masks[sel]
            sign = 1 - 2 * _above_parity(sub.astype(np.uint64), j)
            acc[sel] += sign * fwd[sub ^ (1 << j)]
        pre[masks] = acc
        fwd[masks] = fw[masks] * acc
    full = size - 1
    back[full] = 1
    for k in range(n - 1, -1, -1):
        masks = levels[k]
        acc = np.zeros(masks.size, dtype=dtype)
        for j in range(n):
            sel = np.flatnonzero((masks & (1 << j)) == 0)
            sub = masks[sel]
            up = sub | (1 << j)
            sign = 1 - 2 * _above_parity(sub.astype(np.uint64), j)
            acc[sel] += sign * fw[up] * back[up]
        back[masks] = acc
    part = pre * back
    part[0] = 0
    gN = fwd[full]
    return (int(gN) if exact else float(gN)), part
