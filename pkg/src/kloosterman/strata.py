"""Stratification data: exponent matrices m, coset sets C_w(m), and counts.

Each supported Weyl element carries an index support (which matrix positions
m_ij are summation data) and a rule assigning every summation variable c_ij
its modulus exponent.  The row-sum constraint is uniform across elements:
r_k is the sum of m_ij over support indices with i <= k <= j.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded, NotInStratum
from .modcore import is_prime, residue_count

DEFAULT_BUDGET = 10 ** 7


def term_budget() -> int:
    return int(os.environ.get("KLOOSTERMAN_BUDGET", DEFAULT_BUDGET))


class WeylElement(Enum):
    LONG = "long"
    STAR = "star"
    GL4_BLOCK_SWAP = "blockswap"
    GL4_MIXED = "mixed"


def support(w: WeylElement, n: int) -> list[tuple[int, int]]:
    """Support indices (i, j), sorted lexicographically."""
    if w is WeylElement.LONG:
        return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    if w is WeylElement.STAR:
        if n < 2:
            raise ValueError("the order-2 element is defined here for n >= 2")
        hook = [(1, j) for j in range(1, n + 1)] + [(i, n) for i in range(2, n + 1)]
        return sorted(set(hook))
    if w is WeylElement.GL4_BLOCK_SWAP:
        if n != 3:
            raise ValueError("blockswap is a GL(4) element (n = 3)")
        return [(1, 2), (1, 3), (2, 2), (2, 3)]
    if w is WeylElement.GL4_MIXED:
        if n != 3:
            raise ValueError("mixed is a GL(4) element (n = 3)")
        return [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)]
    raise ValueError(w)


@dataclass(frozen=True)
class ModulusSpec:
    """Prime p together with the exponent vector r of the modulus C."""

    p: int
    r: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if len(self.r) < 1 or any(rk < 0 for rk in self.r):
            raise ValueError("r must be a nonempty vector of nonnegative integers")

    @property
    def n(self) -> int:
        return len(self.r)

    def trivial_bound(self) -> int:
        return self.p ** sum(self.r)


@dataclass(frozen=True)
class ExponentMatrix:
    """Exponent datum m on the support of a Weyl element.

    Off-support lookups (including i > j) read as 0, matching the standing
    convention c_ij = 1, m_ij = 0 there.
    """

    n: int
    weyl: WeylElement
    entries: dict[tuple[int, int], int] = field(compare=False)
    _key: tuple = field(default=None, compare=True, repr=False)

    def __init__(self, n: int, weyl: WeylElement, entries: dict):
        sup = support(weyl, n)
        clean = {}
        for idx in sup:
            v = int(entries.get(idx, 0))
            if v < 0:
                raise ValueError(f"negative exponent at {idx}")
            clean[idx] = v
        extra = set(entries) - set(sup)
        if any(entries[idx] != 0 for idx in extra):
            raise ValueError(f"nonzero entries off support: {sorted(extra)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weyl", weyl)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "_key", (n, weyl, tuple(clean[idx] for idx in sup)))

    def m(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def flat(self) -> tuple[int, ...]:
        return tuple(self.entries[idx] for idx in support(self.weyl, self.n))

    def row_sums(self) -> tuple[int, ...]:
        return tuple(
            sum(v for (i, j), v in self.entries.items() if i <= k <= j)
            for k in range(1, self.n + 1)
        )

    def height(self) -> int:
        return sum(self.row_sums())

    def kappa(self) -> int:
        return sum(1 for v in self.entries.values() if v != 0)

    def to_json(self) -> list:
        return [[i, j, v] for (i, j), v in sorted(self.entries.items())]

    def __repr__(self):
        body = ", ".join(f"m{i}{j}={v}" for (i, j), v in sorted(self.entries.items()) if v)
        return f"ExponentMatrix({self.weyl.value}, n={self.n}, {body or '0'})"


def enumerate_strata(w: WeylElement, r: tuple[int, ...]) -> list[ExponentMatrix]:
    """All m on the support of w with row sums r, in lexicographic flat order.

    Depth-first assignment over the sorted support with remaining-budget
    pruning; each solution appears exactly once.
    """
    n = len(r)
    sup = support(w, n)
    out: list[ExponentMatrix] = []
    remaining = list(r)

    def assign(pos: int, acc: dict):
        if pos == len(sup):
            if all(v == 0 for v in remaining):
                out.append(ExponentMatrix(n, w, dict(acc)))
            return
        i, j = sup[pos]
        # later indices can still feed row k only if some (i', j') with
        # i' <= k <= j' remains
        cap = min(remaining[k - 1] for k in range(i, j + 1))
        for v in range(cap + 1):
            for k in range(i, j + 1):
                remaining[k - 1] -= v
            # prune rows that no later support index covers
            feasible = all(
                remaining[k - 1] == 0
                or any(i2 <= k <= j2 for (i2, j2) in sup[pos + 1 :])
                for k in range(1, n + 1)
            )
            if feasible:
                acc[(i, j)] = v
                assign(pos + 1, acc)
                del acc[(i, j)]
            for k in range(i, j + 1):
                remaining[k - 1] += v

    assign(0, {})
    out.sort(key=lambda m: m.flat())
    return out


def modulus_exponent(w: WeylElement, m: ExponentMatrix, idx: tuple[int, int]) -> int:
    """Exponent of the modulus p^e of the summation variable c_idx."""
    i, j = idx
    n = m.n
    if w is WeylElement.LONG:
        return sum(m.m(i, k) for k in range(j, n + 1))
    if w is WeylElement.STAR:
        if i == 1:
            return sum(m.m(1, k) for k in range(j, n + 1))
        return sum(m.m(k, n) for k in range(2, i + 1))
    if w is WeylElement.GL4_BLOCK_SWAP:
        table = {
            (2, 2): [(1, 2), (2, 2), (2, 3)],
            (1, 2): [(1, 2), (1, 3)],
            (2, 3): [(1, 3), (2, 3)],
            (1, 3): [(1, 3)],
        }
        return sum(m.m(a, b) for a, b in table[idx])
    if w is WeylElement.GL4_MIXED:
        table = {
            (1, 1): [(1, 1), (1, 2), (1, 3)],
            (1, 2): [(1, 2), (1, 3)],
            (1, 3): [(1, 3)],
            (2, 2): [(2, 2), (2, 3)],
            (2, 3): [(2, 3)],
        }
        return sum(m.m(a, b) for a, b in table[idx])
    raise ValueError(w)


def coset_cardinality(w: WeylElement, m: ExponentMatrix, p: int) -> int:
    """Exact |C_w(m)|: product of moduli, times (1 - 1/p) per unit constraint."""
    total = 1
    for idx in support(w, m.n):
        total *= residue_count(modulus_exponent(w, m, idx), m.m(*idx) > 0, p)
    return total


def dr_count(m: ExponentMatrix, r: tuple[int, ...], p: int) -> int:
    """The Dabrowski-Reeder cardinality p^ht * (1 - 1/p)^kappa, exactly."""
    if m.row_sums() != tuple(r):
        raise NotInStratum(f"row sums {m.row_sums()} != r = {tuple(r)}")
    total = p ** m.height()
    for _ in range(m.kappa()):
        total = total // p * (p - 1)
    return total


def _residues(mod_exp: int, unit: bool, p: int) -> list[int]:
    if unit:
        return [c for c in range(p ** mod_exp) if c % p != 0]
    return list(range(p ** mod_exp))


def iterate_cosets(
    w: WeylElement, m: ExponentMatrix, p: int, budget: int | None = None
) -> Iterator[dict[tuple[int, int], int]]:
    """Yield every coset point of C_w(m) exactly once, as {index: residue}."""
    budget = term_budget() if budget is None else budget
    card = coset_cardinality(w, m, p)
    if card > budget:
        raise BudgetExceeded(card, budget)
    sup = support(w, m.n)
    ranges = [_residues(modulus_exponent(w, m, idx), m.m(*idx) > 0, p) for idx in sup]
    for values in itertools.product(*ranges):
        yield dict(zip(sup, values))


def coset_grid(
    w: WeylElement, m: ExponentMatrix, p: int, budget: int | None = None
) -> dict[tuple[int, int], np.ndarray]:
    """Vectorized coset enumeration: one int64 array per support index.

    Row t across the arrays is the t-th point of iterate_cosets, in the same
    order.
    """
    budget = term_budget() if budget is None else budget
    card = coset_cardinality(w, m, p)
    if card > budget:
        raise BudgetExceeded(card, budget)
    sup = support(w, m.n)
    ranges = [
        np.asarray(_residues(modulus_exponent(w, m, idx), m.m(*idx) > 0, p), dtype=np.int64)
        for idx in sup
    ]
    sizes = [len(a) for a in ranges]
    total = int(np.prod(sizes)) if sizes else 1
    out = {}
    repeat = total
    for idx, arr, size in zip(sup, ranges, sizes):
        repeat //= size
        tile = total // (repeat * size)
        out[idx] = np.tile(np.repeat(arr, repeat), tile)
    return out
