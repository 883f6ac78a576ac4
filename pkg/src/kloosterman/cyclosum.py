"""Exact elements of the group ring Z[zeta] for zeta a p^M-th root of unity.

A CycloSum stores one integer multiplicity per p^M-th root of unity, so a
Kloosterman sum is an exact algebraic integer until the final complex
evaluation.  Canonical form zeroes the top block of indices via the
vanishing relation sum_{j<p} zeta^(k + j*p^(M-1)) = 0; the remaining
coordinates are a Z-basis of Z[zeta], so equal algebraic numbers have equal
canonical arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LevelTooSmall, PrimeMismatch
from .modcore import FracExponent

# Guard: dense multiplicity arrays are refused beyond this many entries.
MAX_ARRAY = 10 ** 7

# Per-term complex roundoff allowance used for eval error bounds.
C_ROUND = 4.0 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class ComplexValue:
    re: float
    im: float
    eps: float

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def close_to(self, other: complex, tol: float = 1e-9) -> bool:
        return abs(complex(self.re, self.im) - other) <= tol + self.eps


class CycloSum:
    """Finite integer combination of p^M-th roots of unity."""

    __slots__ = ("p", "level", "mult")

    def __init__(self, p: int, level: int, mult=None):
        size = p ** level
        if size > MAX_ARRAY:
            raise LevelTooSmall(
                f"p^M = {size} exceeds the dense-array guard {MAX_ARRAY}; shrink r"
            )
        self.p = p
        self.level = level
        if mult is None:
            self.mult = np.zeros(size, dtype=np.int64)
        else:
            self.mult = np.asarray(mult, dtype=np.int64)
            if self.mult.shape != (size,):
                raise ValueError(f"multiplicity array must have length {size}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(p: int, level: int = 0) -> "CycloSum":
        return CycloSum(p, level)

    @staticmethod
    def constant(p: int, value: int, level: int = 0) -> "CycloSum":
        s = CycloSum(p, level)
        s.mult[0] = value
        return s

    @staticmethod
    def root_of_unity(t: FracExponent, level: int) -> "CycloSum":
        """The single root e(t / p^e) viewed among p^level-th roots."""
        if t.e > level:
            raise LevelTooSmall(f"denominator exponent {t.e} exceeds level {level}")
        s = CycloSum(t.p, level)
        s.mult[t.embed(level)] = 1
        return s

    # -- ring-ish operations ----------------------------------------------

    def _embedded(self, level: int) -> np.ndarray:
        if level == self.level:
            return self.mult
        stride = self.p ** (level - self.level)
        out = np.zeros(self.p ** level, dtype=np.int64)
        out[:: stride] = self.mult
        return out

    def add(self, other: "CycloSum") -> "CycloSum":
        if self.p != other.p:
            raise PrimeMismatch(f"p = {self.p} vs {other.p}")
        level = max(self.level, other.level)
        return CycloSum(self.p, level, self._embedded(level) + other._embedded(level))

    __add__ = add

    def scale(self, k: int) -> "CycloSum":
        return CycloSum(self.p, self.level, self.mult * k)

    def reduce(self) -> "CycloSum":
        """Canonical form: indices k + (p-1)p^(M-1) carry multiplicity 0."""
        if self.level == 0:
            return CycloSum(self.p, 0, self.mult.copy())
        block = self.p ** (self.level - 1)
        v = self.mult.reshape(self.p, block).copy()
        v -= v[self.p - 1]
        return CycloSum(self.p, self.level, v.reshape(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycloSum):
            return NotImplemented
        if self.p != other.p:
            return False
        level = max(self.level, other.level)
        a = CycloSum(self.p, level, self._embedded(level)).reduce()
        b = CycloSum(self.p, level, other._embedded(level)).reduce()
        return bool(np.array_equal(a.mult, b.mult))

    def __hash__(self):  # pragma: no cover - mutability makes hashing unwise
        raise TypeError("CycloSum is not hashable")

    def is_zero(self) -> bool:
        return not self.reduce().mult.any()

    def total_multiplicity(self) -> int:
        return int(self.mult.sum())

    # -- evaluation and serialization ---------------------------------------

    def eval_complex(self) -> ComplexValue:
        idx = np.flatnonzero(self.mult)
        if idx.size == 0:
            return ComplexValue(0.0, 0.0, 0.0)
        angles = 2.0 * np.pi * idx / self.p ** self.level
        weights = self.mult[idx].astype(np.float64)
        z = np.sum(weights * np.exp(1j * angles))
        eps = float(np.abs(weights).sum()) * C_ROUND
        return ComplexValue(float(z.real), float(z.imag), eps)

    def to_json(self) -> dict:
        idx = np.flatnonzero(self.mult)
        return {
            "p": self.p,
            "level": self.level,
            "terms": [[int(i), int(self.mult[i])] for i in idx],
        }

    @staticmethod
    def from_json(data: dict) -> "CycloSum":
        s = CycloSum(int(data["p"]), int(data["level"]))
        for i, m in data["terms"]:
            s.mult[int(i)] = int(m)
        return s

    def __repr__(self):
        nz = int(np.count_nonzero(self.mult))
        return f"CycloSum(p={self.p}, level={self.level}, nonzero={nz})"
