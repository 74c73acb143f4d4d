"""Subset encodings, permutation signs and weight functions.

Elements of the ground set ``N = {1, ..., n}`` are 1-based everywhere in the
public API.  A subset is a bitmask in which element ``i`` lives at bit
``i - 1``.  The empty set (mask 0) is never handed to a weight function.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

#: Largest ambient size accepted anywhere.
MAX_N = 30
#: Largest ambient size for engines that materialise all ``2**n`` entries.
MAX_N_TABLE = 26


class SizeError(ValueError):
    """An input exceeds the size limit of the requested evaluator."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class WeightFileError(ValueError):
    """A weight-table or problem file could not be parsed or validated."""


def check_n(n: int, limit: int = MAX_N, what: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"{what} must be an integer, got {type(n).__name__}")
    n = int(n)
    if not 1 <= n <= limit:
        raise SizeError(f"{what}={n} outside the supported range 1..{limit}")
    return n


# --------------------------------------------------------------------------
# subsets


@dataclass(frozen=True)
class SubsetMask:
    """A subset of ``{1..n}`` stored as a bitmask."""

    bits: int
    n: int

    def __post_init__(self):
        check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise DomainError(f"mask {self.bits:#x} has bits outside 1..{self.n}")

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int) -> "SubsetMask":
        return cls(mask_of(elements, n), n)

    @property
    def elements(self) -> list[int]:
        return elements_of(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __int__(self) -> int:
        return self.bits

    def __index__(self) -> int:
        return self.bits


def mask_of(elements: Iterable[int], n: int | None = None) -> int:
    """Bitmask of a collection of 1-based elements."""
    m = 0
    for e in elements:
        e = int(e)
        if e < 1 or (n is not None and e > n):
            raise DomainError(f"element {e} outside 1..{n}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    """Sorted 1-based elements of ``mask``."""
    mask = int(mask)
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def insertion_sign(T: int, a: int) -> int:
    """Sign ``(-1)**c`` where ``c`` counts the elements of ``T`` above ``a``.

    This is the sign picked up when the element ``a`` is moved from the end
    of the sorted tuple of ``T`` into its sorted position.
    """
    T = int(T)
    if a < 1 or not (T >> (a - 1)) & 1:
        raise DomainError(f"element {a} is not in {elements_of(T)}")
    return -1 if (T >> a).bit_count() & 1 else 1


def popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(masks, dtype=np.uint64)).astype(np.int64)


# --------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """A rearrangement of ``1..n``; ``images[i - 1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DomainError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self after other``: ``i -> self(other(i))``."""
        if len(other) != len(self):
            raise DomainError("cannot compose permutations of different sizes")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))


def perm_sign(p: Permutation | Sequence[int]) -> int:
    """``(-1)**inversions``."""
    images = p.images if isinstance(p, Permutation) else tuple(p)
    inversions = 0
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if images[i] > images[j]:
                inversions += 1
    return -1 if inversions & 1 else 1


def sjt_permutations(k: int) -> Iterator[tuple[list[int], int]]:
    """Steinhaus-Johnson-Trotter order over ``0..k-1`` with running sign.

    Consecutive permutations differ by one adjacent swap, so the sign flips
    every step.  The yielded list is reused between steps; copy it to keep it.
    """
    perm = list(range(k))
    # direction per value: -1 looks left, +1 looks right
    direction = [-1] * k
    pos = list(range(k))
    sign = 1
    while True:
        yield perm, sign
        mobile = -1
        for v in range(k - 1, -1, -1):
            p = pos[v]
            q = p + direction[v]
            if 0 <= q < k and perm[q] < v:
                mobile = v
                break
        if mobile < 0:
            return
        p = pos[mobile]
        q = p + direction[mobile]
        other = perm[q]
        perm[p], perm[q] = other, mobile
        pos[mobile], pos[other] = q, p
        sign = -sign
        for v in range(mobile + 1, k):
            direction[v] = -direction[v]


# --------------------------------------------------------------------------
# weight functions


class ValueClass(str, Enum):
    EXACT_PM01 = "exact_pm01"
    REAL = "real"


class WeightFunction(ABC):
    """A map from nonempty subsets of ``{1..n}`` to ``[-1, 1]``.

    Subclasses implement :meth:`values`, the vectorised evaluator.  Entries
    for mask 0 are ignored by every consumer.
    """

    n: int
    value_class: ValueClass

    @property
    def exact(self) -> bool:
        return self.value_class is ValueClass.EXACT_PM01

    @abstractmethod
    def values(self, masks: np.ndarray) -> np.ndarray:
        """Float64 weights for an array of masks."""

    def __call__(self, S: int) -> float:
        S = int(S)
        if S <= 0 or S >> self.n:
            raise DomainError(f"mask {S:#x} is not a nonempty subset of 1..{self.n}")
        return float(self.values(np.array([S], dtype=np.uint64))[0])

    eval = __call__

    def table(self) -> np.ndarray:
        """All ``2**n`` values indexed by mask, entry 0 set to 0."""
        check_n(self.n, MAX_N_TABLE)
        out = np.asarray(self.values(np.arange(1 << self.n, dtype=np.uint64)), dtype=np.float64)
        out = out.copy()
        out[0] = 0.0
        return out


class WeightTable(WeightFunction):
    """Explicit table of ``2**n`` weights; ``values[0]`` is unused."""

    def __init__(self, n: int, values, value_class: ValueClass | str | None = None):
        self.n = check_n(n, MAX_N_TABLE)
        vals = np.array(values, dtype=np.float64)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values for n={self.n}, got shape {vals.shape}")
        vals[0] = 0.0
        bad = np.flatnonzero(~(np.abs(vals) <= 1.0))
        if bad.size:
            m = int(bad[0])
            raise DomainError(f"weight {vals[m]!r} at mask {m} ({elements_of(m)}) is outside [-1, 1]")
        pm01 = bool(np.all((vals == 0) | (vals == 1) | (vals == -1)))
        if value_class is None:
            value_class = ValueClass.EXACT_PM01 if pm01 else ValueClass.REAL
        value_class = ValueClass(value_class)
        if value_class is ValueClass.EXACT_PM01 and not pm01:
            raise DomainError("exact_pm01 declared but the table has values outside {-1, 0, 1}")
        self.value_class = value_class
        self._values = vals
        self._values.setflags(write=False)

    @classmethod
    def constant(cls, n: int, c: float = 1.0) -> "WeightTable":
        vals = np.full(1 << n, float(c))
        return cls(n, vals)

    @classmethod
    def from_dict(cls, n: int, entries: dict, default: float = 0.0) -> "WeightTable":
        """Build from ``{frozenset-or-tuple of elements: value}``."""
        vals = np.full(1 << n, float(default))
        for S, v in entries.items():
            vals[mask_of(S, n)] = v
        return cls(n, vals)

    @property
    def array(self) -> np.ndarray:
        return self._values

    def values(self, masks):
        return self._values[np.asarray(masks, dtype=np.int64)]

    def table(self):
        return self._values.copy()

    def with_value(self, S: int, v: float) -> "WeightTable":
        vals = self._values.copy()
        vals[int(S)] = v
        return WeightTable(self.n, vals)

    def __eq__(self, other):
        return isinstance(other, WeightTable) and self.n == other.n and np.array_equal(self._values, other._values)

    def __repr__(self):
        return f"WeightTable(n={self.n}, value_class={self.value_class.value})"

    # JSON file format: {"n": int, "values": [2**n numbers]}

    def to_json(self) -> str:
        if self.exact:
            vals = [int(v) for v in self._values]
        else:
            vals = [float(v) for v in self._values]
        return json.dumps({"n": self.n, "values": vals})

    @classmethod
    def from_json(cls, text: str) -> "WeightTable":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise WeightFileError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise WeightFileError("weight file must hold a JSON object")
        n = doc.get("n")
        if isinstance(n, bool) or not isinstance(n, int):
            raise WeightFileError("field 'n' must be an integer")
        try:
            check_n(n, MAX_N_TABLE)
        except SizeError as exc:
            raise WeightFileError(f"field 'n': {exc}") from None
        values = doc.get("values")
        if not isinstance(values, list) or len(values) != 1 << n:
            raise WeightFileError(f"field 'values' must be a list of {1 << n} numbers")
        for m, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise WeightFileError(f"field 'values'[{m}]: {v!r} is not a number")
            if m == 0:
                if v != 0:
                    raise WeightFileError("field 'values'[0] (empty set) must be 0")
            elif not (-1.0 <= v <= 1.0):
                raise WeightFileError(f"field 'values'[{m}] = {v!r} for mask {m} {elements_of(m)} is outside [-1, 1]")
        return cls(n, values)

    def save(self, path) -> str:
        text = self.to_json()
        with open(path, "w") as fh:
            fh.write(text + "\n")
        return text

    @classmethod
    def load(cls, path) -> "WeightTable":
        with open(path) as fh:
            return cls.from_json(fh.read())


class FunctionWeight(WeightFunction):
    """Wrap a scalar callable ``mask -> value``; evaluation is per mask."""

    def __init__(self, n: int, fn: Callable[[int], float], value_class: ValueClass | str = ValueClass.REAL):
        self.n = check_n(n)
        self.fn = fn
        self.value_class = ValueClass(value_class)

    def values(self, masks):
        masks = np.asarray(masks, dtype=np.uint64)
        out = np.empty(masks.shape, dtype=np.float64)
        for i, m in enumerate(masks.tolist()):
            out[i] = self.fn(m) if m else 0.0
        bad = np.flatnonzero(~(np.abs(out) <= 1.0))
        if bad.size:
            m = int(masks[bad[0]])
            raise DomainError(f"weight {out[bad[0]]!r} at mask {m} is outside [-1, 1]")
        return out


WEIGHT_MODES = ("uniform", "pm_one", "zero_one")


def weight_table_random(n: int, seed: int, mode: str = "uniform") -> WeightTable:
    """Reproducible random weight table.

    ``uniform`` draws from [-1, 1), ``pm_one`` from {-1, +1} and ``zero_one``
    from {0, 1}.
    """
    n = check_n(n, MAX_N_TABLE)
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    size = 1 << n
    if mode == "uniform":
        vals = rng.uniform(-1.0, 1.0, size)
    elif mode == "pm_one":
        vals = rng.integers(0, 2, size).astype(np.float64) * 2.0 - 1.0
    elif mode == "zero_one":
        vals = rng.integers(0, 2, size).astype(np.float64)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected one of {WEIGHT_MODES}")
    vals[0] = 0.0
    value_class = ValueClass.REAL if mode == "uniform" else ValueClass.EXACT_PM01
    return WeightTable(n, vals, value_class)


def sqrt_n_pow_n(n: int) -> float:
    """The bound ``sqrt(n)**n`` as a double."""
    return float(n) ** (n / 2.0)


def bound_exact(n: int) -> dict:
    return {"base": n, "exponent": f"{n}/2", "square": str(n**n)}

