"""Prefix-threshold weights.

For tuples ``x`` and ``y`` of rationals, a permutation contributes its sign
when every prefix sum ``x[s(1)] + ... + x[s(k)]`` is at least ``y[k]`` and
nothing otherwise.  Equivalently it is ``g(N)`` for the 0/1 weight
``f(S) = [sum(x_j for j in S) >= y_|S|]``.  All comparisons are exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from . import dp
from .core import MAX_N, ValueClass, WeightFileError, WeightFunction, check_n, elements_of, sqrt_n_pow_n


def parse_rational(v) -> Fraction:
    """``"p/q"``, decimal strings and integers, converted exactly."""
    if isinstance(v, bool):
        raise ValueError(f"{v!r} is not a rational")
    if isinstance(v, (Rational, int)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {v!r} as a rational: {exc}") from None
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"{v!r} is not finite")
        return Fraction(v)
    raise ValueError(f"{v!r} is not a rational")


@dataclass(frozen=True)
class PrefixProblem:
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]

    def __init__(self, x: Sequence, y: Sequence):
        xs = tuple(parse_rational(v) for v in x)
        ys = tuple(parse_rational(v) for v in y)
        if len(xs) != len(ys):
            raise ValueError(f"x has {len(xs)} entries but y has {len(ys)}")
        check_n(len(xs), MAX_N, "len(x)")
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", ys)

    @property
    def n(self) -> int:
        return len(self.x)

    def integer_form(self) -> tuple[list[int], list[int], int]:
        """``(X, Y, D)`` with ``x = X / D`` and ``y = Y / D`` elementwise."""
        D = 1
        for v in self.x + self.y:
            D = math.lcm(D, v.denominator)
        X = [int(v * D) for v in self.x]
        Y = [int(v * D) for v in self.y]
        return X, Y, D

    def scaled(self, c) -> "PrefixProblem":
        c = parse_rational(c)
        return PrefixProblem([c * v for v in self.x], [c * v for v in self.y])

    def to_json(self) -> str:
        return json.dumps({"x": [str(v) for v in self.x], "y": [str(v) for v in self.y]})

    @classmethod
    def from_json(cls, text: str) -> "PrefixProblem":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise WeightFileError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise WeightFileError("problem file must hold a JSON object")
        parsed = {}
        for key in ("x", "y"):
            seq = doc.get(key)
            if not isinstance(seq, list) or not seq:
                raise WeightFileError(f"field {key!r} must be a nonempty list of rationals")
            vals = []
            for i, v in enumerate(seq):
                if isinstance(v, float):
                    raise WeightFileError(f"field {key!r}[{i}]: write {v!r} as a string to keep it exact")
                try:
                    vals.append(parse_rational(v))
                except ValueError as exc:
                    raise WeightFileError(f"field {key!r}[{i}]: {exc}") from None
            parsed[key] = vals
        try:
            return cls(parsed["x"], parsed["y"])
        except ValueError as exc:
            raise WeightFileError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "PrefixProblem":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json() + "\n")


class FermionWeight(WeightFunction):
    """``f(S) = 1`` if the x-sum over ``S`` reaches ``y_|S|``, else 0."""

    value_class = ValueClass.EXACT_PM01

    def __init__(self, problem: PrefixProblem):
        self.problem = problem
        self.n = problem.n
        self._X, self._Y, _ = problem.integer_form()
        big = sum(abs(v) for v in self._X) + max(abs(v) for v in self._Y)
        self._dtype = np.int64 if big < 1 << 62 else object

    def __call__(self, S: int) -> float:
        S = int(S)
        if S <= 0 or S >> self.n:
            raise ValueError(f"mask {S:#x} is not a nonempty subset of 1..{self.n}")
        elems = elements_of(S)
        total = sum((self.problem.x[j - 1] for j in elems), Fraction(0))
        return 1.0 if total >= self.problem.y[len(elems) - 1] else 0.0

    eval = __call__

    def values(self, masks) -> np.ndarray:
        masks = np.asarray(masks, dtype=np.uint64)
        sums = np.zeros(masks.shape, dtype=self._dtype)
        for j, xj in enumerate(self._X):
            if xj:
                has = ((masks >> np.uint64(j)) & np.uint64(1)).astype(bool)
                sums[has] += xj
        size = np.bitwise_count(masks).astype(np.int64)
        Y = np.array([0] + self._Y, dtype=self._dtype)
        out = (sums >= Y[size]).astype(np.float64)
        out[masks == 0] = 0.0
        return out


def fermion_weight(p: PrefixProblem) -> FermionWeight:
    return FermionWeight(p)


def epsilon_sum(p: PrefixProblem) -> int:
    """Sum of the prefix-conditioned signs, via the layered recursion."""
    return int(dp.g_top(fermion_weight(p), p.n))


def proposition_check(p: PrefixProblem, method: str = "dp") -> dict:
    """One-sided check ``sum <= sqrt(n)**n`` plus the two-sided variant.

    Both comparisons are exact: ``s <= sqrt(n)**n`` iff ``s <= 0`` or
    ``s*s <= n**n``.  ``method="brute"`` enumerates permutations instead.
    """
    if method == "dp":
        s = epsilon_sum(p)
    elif method == "brute":
        from .brute import epsilon_sum_brute

        s = epsilon_sum_brute(p)
    else:
        raise ValueError(f"unknown method {method!r}")
    n = p.n
    two_sided = s * s <= n**n
    return {
        "sum": s,
        "bound": sqrt_n_pow_n(n),
        "ok": s <= 0 or two_sided,
        "two_sided_ok": two_sided,
    }


def random_problem(n: int, rng: np.random.Generator, kind: str = "rational") -> PrefixProblem:
    """Random instance whose thresholds sit near typical prefix sums.

    ``kind`` is ``"integer"`` (small integers) or ``"rational"``.
    """
    n = check_n(n)
    if kind == "integer":
        x = [Fraction(int(v)) for v in rng.integers(-3, 4, n)]
        y = [Fraction(int(v)) for v in rng.integers(-3, 3, n)]
    elif kind == "rational":
        x = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-6, 7, n), rng.integers(1, 5, n))]
        mean = sum(x, Fraction(0)) / n
        y = [
            mean * k + Fraction(int(a), int(b))
            for k, a, b in zip(range(1, n + 1), rng.integers(-4, 3, n), rng.integers(1, 4, n))
        ]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return PrefixProblem(x, y)
