# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels.  Same signatures as :mod:`signsum._fallback`."""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.stdint cimport int8_t, int64_t, uint64_t
from libc.stdlib cimport free, malloc

cnp.import_array()

cdef extern from *:
    """
    typedef __int128 sg_i128;
    static inline int sg_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    static inline long long sg_hi(sg_i128 v) { return (long long)(v >> 64); }
    static inline unsigned long long sg_lo(sg_i128 v) { return (unsigned long long)v; }
    static const sg_i128 SG_LIMIT = ((sg_i128)1) << 120;
    """
    ctypedef long long i128 "sg_i128"
    int popcount "sg_popcount"(unsigned long long x) nogil
    long long i128_hi "sg_hi"(i128 v) nogil
    unsigned long long i128_lo "sg_lo"(i128 v) nogil
    i128 LIMIT "SG_LIMIT"
    int __builtin_clzll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXBITS = 64

cdef int64_t BINOM[MAXBITS + 1][MAXBITS + 1]


cdef void _init_binom():
    cdef int b, i
    for b in range(MAXBITS + 1):
        for i in range(MAXBITS + 1):
            BINOM[b][i] = 0
        BINOM[b][0] = 1
        for i in range(1, b + 1):
            BINOM[b][i] = BINOM[b - 1][i - 1] + BINOM[b - 1][i]


_init_binom()

cdef inline object _to_pyint(i128 v):
    return (int(i128_hi(v)) << 64) | int(i128_lo(v))


def level_masks(int n, int k):
    """Masks of popcount ``k`` over ``n`` bits in increasing order."""
    cdef Py_ssize_t m = BINOM[n][k], i
    out = np.empty(m, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef uint64_t v, c, r
    if k == 0:
        o[0] = 0
        return out
    v = ((<uint64_t>1) << k) - 1
    for i in range(m):
        o[i] = v
        # Gosper's hack
        c = v & (~v + 1)
        r = v + c
        v = (((r ^ v) >> 2) // c) | r
    return out


# ---------------------------------------------------------------- brute force

def brute_g(double[::1] local, int k, bint exact):
    """Signed sum over ``S_k`` with prefix products read from ``local``.

    ``local`` is indexed by subsets of the positions ``0..k-1``.
    """
    cdef int perm[16]
    cdef int pos[16]
    cdef int direction[16]
    cdef int i, v, p, q, other, mobile, sign = 1
    cdef uint64_t prefix
    cdef double prod, total = 0.0
    cdef int64_t iprod, itotal = 0
    if k == 0:
        return 1 if exact else 1.0
    for i in range(k):
        perm[i] = i
        pos[i] = i
        direction[i] = -1
    while True:
        prefix = 0
        if exact:
            iprod = 1
            for i in range(k):
                prefix |= (<uint64_t>1) << perm[i]
                iprod *= <int64_t>local[prefix]
            itotal += sign * iprod
        else:
            prod = 1.0
            for i in range(k):
                prefix |= (<uint64_t>1) << perm[i]
                prod *= local[prefix]
            total += sign * prod
        mobile = -1
        for v in range(k - 1, -1, -1):
            q = pos[v] + direction[v]
            if 0 <= q < k and perm[q] < v:
                mobile = v
                break
        if mobile < 0:
            break
        p = pos[mobile]
        q = p + direction[mobile]
        other = perm[q]
        perm[p] = other
        perm[q] = mobile
        pos[mobile] = q
        pos[other] = p
        sign = -sign
        for v in range(mobile + 1, k):
            direction[v] = -direction[v]
    if exact:
        return int(itotal)
    return total


def epsilon_brute(const int64_t[::1] x, const int64_t[::1] y):
    """Sum of signs of permutations whose prefix sums all clear ``y``."""
    cdef int k = x.shape[0]
    cdef int perm[16]
    cdef int pos[16]
    cdef int direction[16]
    cdef int i, v, p, q, other, mobile, sign = 1
    cdef int64_t s, total = 0
    cdef bint ok
    for i in range(k):
        perm[i] = i
        pos[i] = i
        direction[i] = -1
    while True:
        s = 0
        ok = True
        for i in range(k):
            s += x[perm[i]]
            if s < y[i]:
                ok = False
                break
        if ok:
            total += sign
        mobile = -1
        for v in range(k - 1, -1, -1):
            q = pos[v] + direction[v]
            if 0 <= q < k and perm[q] < v:
                mobile = v
                break
        if mobile < 0:
            break
        p = pos[mobile]
        q = p + direction[mobile]
        other = perm[q]
        perm[p] = other
        perm[q] = mobile
        pos[mobile] = q
        pos[other] = p
        sign = -sign
        for v in range(mobile + 1, k):
            direction[v] = -direction[v]
    return int(total)


# ---------------------------------------------------------------- full table

def g_table(double[::1] f, int n, bint exact):
    """All ``g(T)`` in increasing mask order; int64 when ``exact``."""
    cdef uint64_t size = (<uint64_t>1) << n, T, rest, bit
    cdef int parity
    cdef double acc
    if exact:
        gi = np.empty(size, dtype=np.int64)
        return _g_table_exact(f, n, gi)
    gr = np.empty(size, dtype=np.float64)
    cdef double[::1] g = gr
    g[0] = 1.0
    with nogil:
        for T in range(1, size):
            acc = 0.0
            parity = 0
            rest = T
            # walk from the highest element down; parity counts elements above
            while rest:
                bit = (<uint64_t>1) << (63 - __builtin_clzll(rest))
                if parity:
                    acc -= g[T ^ bit]
                else:
                    acc += g[T ^ bit]
                parity ^= 1
                rest ^= bit
            g[T] = f[T] * acc
    return gr



cdef object _g_table_exact(double[::1] f, int n, object out):
    cdef int64_t[::1] g = out
    cdef uint64_t size = (<uint64_t>1) << n, T, rest, bit
    cdef int parity
    cdef i128 acc
    cdef i128 lim64 = (<i128>1) << 63
    cdef int64_t fv
    cdef uint64_t bad = 0
    g[0] = 1
    with nogil:
        for T in range(1, size):
            fv = <int64_t>f[T]
            if fv == 0:
                g[T] = 0
                continue
            acc = 0
            parity = 0
            rest = T
            while rest:
                bit = (<uint64_t>1) << (63 - __builtin_clzll(rest))
                if parity:
                    acc -= g[T ^ bit]
                else:
                    acc += g[T ^ bit]
                parity ^= 1
                rest ^= bit
            if fv < 0:
                acc = -acc
            if acc >= lim64 or acc < -lim64:
                bad = T
                break
            g[T] = <int64_t>acc
    if bad:
        raise OverflowError(f"exact g overflows int64 storage at mask {bad}")
    return out


# ---------------------------------------------------------------- layered

cdef inline double _entry_real(uint64_t T, int k, const double* prev) noexcept nogil:
    cdef int b[MAXBITS]
    cdef int64_t pre[MAXBITS + 1]
    cdef int64_t suf[MAXBITS + 1]
    cdef int i, j
    cdef uint64_t rest = T
    cdef double acc = 0.0
    for i in range(k):
        b[i] = __builtin_ctzll(rest)
        rest &= rest - 1
    # colex rank pieces: element i keeps index i+1 left of the removed one,
    # drops to index i to its right
    pre[0] = 0
    for i in range(k):
        pre[i + 1] = pre[i] + BINOM[b[i]][i + 1]
    suf[k] = 0
    for i in range(k - 1, -1, -1):
        suf[i] = suf[i + 1] + BINOM[b[i]][i]
    for j in range(k):
        if (k - 1 - j) & 1:
            acc -= prev[pre[j] + suf[j + 1]]
        else:
            acc += prev[pre[j] + suf[j + 1]]
    return acc


cdef inline i128 _entry_exact(uint64_t T, int k, const i128* prev) noexcept nogil:
    cdef int b[MAXBITS]
    cdef int64_t pre[MAXBITS + 1]
    cdef int64_t suf[MAXBITS + 1]
    cdef int i, j
    cdef uint64_t rest = T
    cdef i128 acc = 0
    for i in range(k):
        b[i] = __builtin_ctzll(rest)
        rest &= rest - 1
    pre[0] = 0
    for i in range(k):
        pre[i + 1] = pre[i] + BINOM[b[i]][i + 1]
    suf[k] = 0
    for i in range(k - 1, -1, -1):
        suf[i] = suf[i + 1] + BINOM[b[i]][i]
    for j in range(k):
        if (k - 1 - j) & 1:
            acc -= prev[pre[j] + suf[j + 1]]
        else:
            acc += prev[pre[j] + suf[j + 1]]
    return acc



def g_top(level_weights, int n, bint exact, int nthreads=1):
    """``g(N)`` from two rolling level buffers.

    ``level_weights(k, masks)`` returns the weights of the level-``k`` masks.
    Entries within a level are computed independently (OpenMP over
    ``nthreads``), so the result does not depend on the schedule.
    """
    if exact:
        return _g_top_exact(level_weights, n, nthreads)
    cdef Py_ssize_t m, r
    cdef int k
    cdef uint64_t[::1] masks
    cdef double[::1] w
    cdef double[::1] prev
    cdef double[::1] out
    prev_arr = np.ones(1, dtype=np.float64)
    prev = prev_arr
    for k in range(1, n + 1):
        marr = level_masks(n, k)
        masks = marr
        w = np.ascontiguousarray(level_weights(k, marr), dtype=np.float64)
        m = masks.shape[0]
        out_arr = np.empty(m, dtype=np.float64)
        out = out_arr
        for r in prange(m, nogil=True, num_threads=nthreads, schedule="static"):
            if w[r] == 0.0:
                out[r] = 0.0
            else:
                out[r] = w[r] * _entry_real(masks[r], k, &prev[0])
        prev_arr = out_arr
        prev = out
    return float(prev[0])


cdef object _g_top_exact(level_weights, int n, int nthreads):
    cdef Py_ssize_t m, r
    cdef int k
    cdef uint64_t[::1] masks
    cdef int8_t[::1] w
    cdef i128* prev = <i128*>malloc(sizeof(i128))
    cdef i128* out
    cdef i128 acc
    cdef uint64_t bad = 0
    cdef uint64_t* badp = &bad
    if prev == NULL:
        raise MemoryError()
    prev[0] = 1
    try:
        for k in range(1, n + 1):
            marr = level_masks(n, k)
            masks = marr
            warr = np.asarray(level_weights(k, marr))
            if warr.size and (warr.min() < -1 or warr.max() > 1 or np.any(warr != np.round(warr))):
                raise ValueError("exact backend needs weights in {-1, 0, 1}")
            w = np.ascontiguousarray(warr, dtype=np.int8)
            m = masks.shape[0]
            out = <i128*>malloc(m * sizeof(i128))
            if out == NULL:
                raise MemoryError()
            for r in prange(m, nogil=True, num_threads=nthreads, schedule="static"):
                if w[r] == 0:
                    out[r] = 0
                else:
                    acc = _entry_exact(masks[r], k, prev)
                    if w[r] < 0:
                        acc = -acc
                    if acc > LIMIT or acc < -LIMIT:
                        badp[0] = masks[r]
                    out[r] = acc
            free(prev)
            prev = out
            if bad:
                raise OverflowError(f"exact g exceeds the 128-bit guard at mask {bad}")
        return _to_pyint(prev[0])
    finally:
        free(prev)


# ---------------------------------------------------------------- partials

def g_partials(double[::1] f, int n, bint exact):
    """``g(N)`` and ``d g(N) / d f(S)`` for every mask ``S``.

    The partial is the signed sum over chains through ``S`` with the factor
    ``f(S)`` left out: (pre-weight forward value) * (backward value).
    """
    cdef uint64_t size = (<uint64_t>1) << n, full = size - 1, T, rest, bit, U
    cdef int parity, j
    if exact:
        return _g_partials_exact(f, n)
    fwd_arr = np.empty(size, dtype=np.float64)
    pre_arr = np.zeros(size, dtype=np.float64)
    back_arr = np.empty(size, dtype=np.float64)
    cdef double[::1] fwd = fwd_arr
    cdef double[::1] pre = pre_arr
    cdef double[::1] back = back_arr
    cdef double acc
    with nogil:
        fwd[0] = 1.0
        for T in range(1, size):
            acc = 0.0
            parity = 0
            rest = T
            while rest:
                bit = (<uint64_t>1) << (63 - __builtin_clzll(rest))
                if parity:
                    acc -= fwd[T ^ bit]
                else:
                    acc += fwd[T ^ bit]
                parity ^= 1
                rest ^= bit
            pre[T] = acc
            fwd[T] = f[T] * acc
        back[full] = 1.0
        T = full
        while T > 0:
            T -= 1
            acc = 0.0
            for j in range(n):
                bit = (<uint64_t>1) << j
                if T & bit:
                    continue
                U = T | bit
                if popcount(T >> (j + 1)) & 1:
                    acc -= f[U] * back[U]
                else:
                    acc += f[U] * back[U]
            back[T] = acc
    part = pre_arr * back_arr
    part[0] = 0.0
    return float(fwd_arr[full]), part


cdef object _g_partials_exact(double[::1] f, int n):
    cdef uint64_t size = (<uint64_t>1) << n, full = size - 1, T, rest, bit, U
    cdef int parity, j
    fwd_arr = np.empty(size, dtype=np.int64)
    pre_arr = np.zeros(size, dtype=np.int64)
    back_arr = np.empty(size, dtype=np.int64)
    cdef int64_t[::1] fwd = fwd_arr
    cdef int64_t[::1] pre = pre_arr
    cdef int64_t[::1] back = back_arr
    cdef int64_t acc, fv
    with nogil:
        fwd[0] = 1
        for T in range(1, size):
            acc = 0
            parity = 0
            rest = T
            while rest:
                bit = (<uint64_t>1) << (63 - __builtin_clzll(rest))
                if parity:
                    acc -= fwd[T ^ bit]
                else:
                    acc += fwd[T ^ bit]
                parity ^= 1
                rest ^= bit
            pre[T] = acc
            fwd[T] = (<int64_t>f[T]) * acc
        back[full] = 1
        T = full
        while T > 0:
            T -= 1
            acc = 0
            for j in range(n):
                bit = (<uint64_t>1) << j
                if T & bit:
                    continue
                U = T | bit
                fv = <int64_t>f[U]
                if popcount(T >> (j + 1)) & 1:
                    acc -= fv * back[U]
                else:
                    acc += fv * back[U]
            back[T] = acc
    part = pre_arr * back_arr
    part[0] = 0
    return int(fwd_arr[full]), part
