"""Exterior-algebra form of the recursion.

Level ``k`` of the exterior algebra over R^n has the orthonormal basis
``delta_S = e_{s1} ^ ... ^ e_{sk}`` for k-subsets ``S`` (``s1 < ... < sk``).
A :class:`GradedVector` stores one level densely, coefficients ordered by
increasing mask.

Two operators drive the pipeline:

* ``P`` multiplies the coefficient of ``delta_S`` by ``f(S)``;
* ``R`` is right multiplication by ``alpha = (e_1 + ... + e_n) / sqrt(n)``.

Starting from ``delta_empty`` and applying ``sqrt(n) * P(R(.))`` ``n`` times
leaves ``g(N) * delta_N``.  Level ``k`` of that iteration equals ``g``
restricted to the k-subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .core import MAX_N, DomainError, SizeError, WeightFunction, check_n, elements_of

MAX_N_OPERATOR = 20
MAX_N_WEDGE = 12
MAX_K_GRAM = 12
DET_FLOOR = 1e-300


class ShapeError(ValueError):
    """Operands of incompatible size or level."""


class LevelError(ValueError):
    """An operator was applied outside the levels where it is defined."""


def _masks(n: int, k: int) -> np.ndarray:
    return _backend.kernels().level_masks(n, k)


@dataclass(eq=False)
class GradedVector:
    n: int
    k: int
    coeffs: np.ndarray
    _masks: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        check_n(self.n, MAX_N)
        if not 0 <= self.k <= self.n:
            raise ShapeError(f"level {self.k} outside 0..{self.n}")
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.shape != (math.comb(self.n, self.k),):
            raise ShapeError(f"level {self.k} of n={self.n} has {math.comb(self.n, self.k)} coefficients, got {self.coeffs.shape}")

    @property
    def masks(self) -> np.ndarray:
        if self._masks is None:
            self._masks = _masks(self.n, self.k)
        return self._masks

    @classmethod
    def zeros(cls, n: int, k: int) -> "GradedVector":
        return cls(n, k, np.zeros(math.comb(n, k)))

    @classmethod
    def basis(cls, n: int, S) -> "GradedVector":
        """``delta_S``; ``S`` is a mask or an iterable of 1-based elements."""
        if not isinstance(S, (int, np.integer)):
            S = sum(1 << (e - 1) for e in S)
        S = int(S)
        if S >> n:
            raise DomainError(f"{elements_of(S)} is not a subset of 1..{n}")
        v = cls.zeros(n, S.bit_count())
        v.coeffs[np.searchsorted(v.masks, np.uint64(S))] = 1.0
        return v

    @classmethod
    def random(cls, n: int, k: int, rng: np.random.Generator) -> "GradedVector":
        return cls(n, k, rng.standard_normal(math.comb(n, k)))

    def coeff(self, S) -> float:
        if not isinstance(S, (int, np.integer)):
            S = sum(1 << (e - 1) for e in S)
        S = int(S)
        if S.bit_count() != self.k or S >> self.n:
            return 0.0
        return float(self.coeffs[np.searchsorted(self.masks, np.uint64(S))])

    def as_dict(self) -> dict[int, float]:
        return {int(m): float(c) for m, c in zip(self.masks, self.coeffs) if c != 0.0}

    def norm(self) -> float:
        return float(np.sqrt(self.coeffs @ self.coeffs))

    def _like(self, coeffs: np.ndarray) -> "GradedVector":
        return GradedVector(self.n, self.k, coeffs, self._masks)

    def __add__(self, other: "GradedVector") -> "GradedVector":
        _same_level(self, other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        _same_level(self, other)
        return self._like(self.coeffs - other.coeffs)

    def __mul__(self, c: float) -> "GradedVector":
        return self._like(self.coeffs * c)

    __rmul__ = __mul__


def _same_level(u: GradedVector, v: GradedVector) -> None:
    if u.n != v.n or u.k != v.k:
        raise ShapeError(f"level mismatch: (n={u.n}, k={u.k}) vs (n={v.n}, k={v.k})")


def inner_product(u: GradedVector, v: GradedVector) -> float:
    _same_level(u, v)
    return float(u.coeffs @ v.coeffs)


# ---------------------------------------------------------------- determinants


def lu_det(A) -> np.ndarray | float:
    """Determinant by LU with partial pivoting, batched over leading axes.

    Results with magnitude below 1e-300 are reported as exactly 0.
    """
    A = np.array(A, dtype=np.float64)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ShapeError(f"expected square matrices, got shape {A.shape}")
    batch = A.shape[:-2]
    k = A.shape[-1]
    A = A.reshape(-1, k, k)
    m = A.shape[0]
    det = np.ones(m)
    rows = np.arange(m)
    for c in range(k):
        piv = c + np.argmax(np.abs(A[:, c:, c]), axis=1)
        swap = piv != c
        if swap.any():
            det[swap] = -det[swap]
            top = A[rows, c].copy()
            A[rows, c] = A[rows, piv]
            A[rows, piv] = top
        d = A[:, c, c]
        det *= d
        d = np.where(d == 0.0, 1.0, d)
        factors = A[:, c + 1 :, c] / d[:, None]
        A[:, c + 1 :, c:] -= factors[:, :, None] * A[:, None, c, c:]
    det[np.abs(det) < DET_FLOOR] = 0.0
    det = det.reshape(batch)
    return float(det) if det.ndim == 0 else det


def wedge_basis(*vectors) -> GradedVector:
    """Coefficients of ``v_1 ^ ... ^ v_k`` in the ``delta_S`` basis.

    The coefficient of ``delta_S`` is the determinant of the ``k x k`` minor
    with rows ``v_i`` and columns the elements of ``S``.
    """
    if len(vectors) == 1 and np.ndim(vectors[0]) == 2:
        V = np.asarray(vectors[0], dtype=np.float64)
    else:
        V = np.array(vectors, dtype=np.float64)
    if V.ndim != 2:
        raise ShapeError("expected k vectors of equal length")
    k, n = V.shape
    if n > MAX_N_WEDGE:
        raise SizeError(f"wedge_basis is limited to n <= {MAX_N_WEDGE}")
    if not 1 <= k <= n:
        raise ShapeError(f"cannot wedge {k} vectors in R^{n}")
    masks = _masks(n, k)
    cols = np.array([[e - 1 for e in elements_of(int(m))] for m in masks], dtype=np.int64)
    minors = V[:, cols].transpose(1, 0, 2)  # (subsets, rows, cols)
    return GradedVector(n, k, lu_det(minors), masks)


def gram_inner(V, W) -> float:
    """``det(<v_i, w_j>)``, the inner product of two decomposable k-vectors."""
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    W = np.atleast_2d(np.asarray(W, dtype=np.float64))
    if V.shape != W.shape:
        raise ShapeError(f"shape mismatch {V.shape} vs {W.shape}")
    if V.shape[0] > MAX_K_GRAM:
        raise SizeError(f"gram_inner is limited to k <= {MAX_K_GRAM}")
    return lu_det(V @ W.T)


# ---------------------------------------------------------------- operators


def alpha(n: int) -> GradedVector:
    """``(delta_{1} + ... + delta_{n}) / sqrt(n)``, a unit vector at level 1."""
    return GradedVector(n, 1, np.full(n, 1.0 / math.sqrt(n)))


def apply_P(f: WeightFunction, v: GradedVector) -> GradedVector:
    if v.k < 1:
        raise LevelError("P is only applied at levels >= 1")
    if f.n != v.n:
        raise ShapeError(f"weight function on n={f.n}, vector on n={v.n}")
    return v._like(v.coeffs * f.values(v.masks))


def _raising_pairs(n: int, k: int):
    """For each j: source indices at level k lacking j, target indices at
    level k+1, and the sign of inserting ``e_j`` on the right."""
    lo = _masks(n, k)
    hi = _masks(n, k + 1)
    for j in range(n):
        bit = np.uint64(1 << j)
        src = np.flatnonzero((lo & bit) == 0)
        sub = lo[src]
        dst = np.searchsorted(hi, sub | bit)
        above = np.bitwise_count(sub >> np.uint64(j + 1)) & 1
        yield src, dst, 1.0 - 2.0 * above


def apply_R(v: GradedVector) -> GradedVector:
    """``v ^ alpha``: level ``k`` to level ``k + 1``."""
    if v.k >= v.n:
        raise LevelError(f"R maps level {v.k} beyond the top level {v.n}")
    out = np.zeros(math.comb(v.n, v.k + 1))
    for src, dst, sign in _raising_pairs(v.n, v.k):
        out[dst] += sign * v.coeffs[src]
    return GradedVector(v.n, v.k + 1, out / math.sqrt(v.n))


def apply_R_adjoint(v: GradedVector) -> GradedVector:
    """Adjoint of :func:`apply_R`: level ``k + 1`` to level ``k``."""
    if v.k < 1:
        raise LevelError("the adjoint of R is not defined on level 0")
    out = np.zeros(math.comb(v.n, v.k - 1))
    for src, dst, sign in _raising_pairs(v.n, v.k - 1):
        out[src] += sign * v.coeffs[dst]
    return GradedVector(v.n, v.k - 1, out / math.sqrt(v.n))


def g_operator(f: WeightFunction, n: int | None = None) -> float:
    """``g(N)`` as the top coefficient of ``(sqrt(n) P R)**n delta_empty``."""
    n = f.n if n is None else n
    n = check_n(n, MAX_N_OPERATOR)
    if n != f.n:
        raise ValueError(f"weight function is defined on n={f.n}, asked for n={n}")
    scale = math.sqrt(n)
    v = GradedVector(n, 0, np.ones(1))
    for _ in range(n):
        v = apply_P(f, apply_R(v)) * scale
    return float(v.coeffs[0])


def g_levels(f: WeightFunction) -> list[GradedVector]:
    """All intermediate levels of the pipeline, level 0 through n."""
    check_n(f.n, MAX_N_OPERATOR)
    scale = math.sqrt(f.n)
    out = [GradedVector(f.n, 0, np.ones(1))]
    for _ in range(f.n):
        out.append(apply_P(f, apply_R(out[-1])) * scale)
    return out
