"""Assembly and exact evaluation of the stratified Kloosterman sums.

Every partial sum is a sum over coset points of e(Phi(c)) where Phi is a sum
of "phase terms", each of the shape

    psi_slot * c_lin * inverse(c_inv) * p^(sum of m's) / p^(sum of m's).

The term tables below transcribe the two general formulas (full triangle for
the long element, hook for the order-2 element); the GL(4)-specific elements
supply their own tables in the gl4 module through the same evaluator.

Conventions, applied mechanically:
  * c_ij = 1 and m_ij = 0 whenever (i, j) lies outside the support
    (in particular for i > j), and the inverse of such a c_ij is 1;
  * for a genuine summation variable with m_ij = 0 the inverse is the
    formal 0, so the whole term is dropped;
  * a term whose accumulated power of p is nonnegative is an integer and
    contributes nothing mod 1.

Phases are linear in the characters, so each coset point is reduced to one
integer component per character slot at level M = ht(m); assembling the sum
for a character pair is then a vectorized index computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from random import Random

import numpy as np

from .cyclosum import ComplexValue, CycloSum
from .errors import LevelTooSmall, NotAUnit
from .strata import (
    ExponentMatrix,
    ModulusSpec,
    WeylElement,
    coset_grid,
    enumerate_strata,
    modulus_exponent,
    support,
)


@dataclass(frozen=True)
class CharacterPair:
    """The two unipotent characters, as integer vectors of length n."""

    psi: tuple[int, ...]
    psi_prime: tuple[int, ...]

    def __post_init__(self):
        if len(self.psi) != len(self.psi_prime):
            raise ValueError("psi and psi' must have equal length")

    @property
    def n(self) -> int:
        return len(self.psi)

    @staticmethod
    def units(n: int) -> "CharacterPair":
        return CharacterPair((1,) * n, (1,) * n)


@dataclass(frozen=True)
class PhaseTerm:
    """One summand of the exponent: slot * lin * inv^(-1) * p^(num - den)."""

    slot: str  # "psi" or "psi_prime"
    slot_index: int  # 1-based
    lin: tuple[int, int] | None
    inv: tuple[int, int] | None
    num_m: tuple[tuple[int, int], ...] = ()
    den_m: tuple[tuple[int, int], ...] = ()


def _long_terms(n: int) -> list[PhaseTerm]:
    terms = []
    for j in range(1, n + 1):
        for i in range(1, j + 1):
            terms.append(
                PhaseTerm(
                    "psi",
                    j,
                    lin=(i, j - 1),
                    inv=(i, j),
                    num_m=tuple((k, j - 1) for k in range(1, i)),
                    den_m=tuple((k, j) for k in range(1, i + 1)),
                )
            )
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            terms.append(
                PhaseTerm(
                    "psi_prime",
                    i,
                    lin=(n + 1 - i, n + 1 - j),
                    inv=(n + 2 - i, n + 1 - j),
                    num_m=tuple((n + 2 - i, n + 1 - k) for k in range(1, j)),
                    den_m=tuple((n + 1 - i, n + 1 - k) for k in range(1, j + 1)),
                )
            )
    return terms


def _star_terms(n: int) -> list[PhaseTerm]:
    if n < 2:
        raise ValueError("the order-2 element is defined here for n >= 2")
    terms = [PhaseTerm("psi", 1, lin=None, inv=(1, 1), den_m=((1, 1),))]
    for j in range(2, n + 1):
        terms.append(PhaseTerm("psi", j, lin=(1, j - 1), inv=(1, j), den_m=((1, j),)))
        terms.append(
            PhaseTerm(
                "psi",
                j,
                lin=(j + 1, n),
                inv=(j, n),
                num_m=((1, j - 1),),
                den_m=((1, j), (j, n)),
            )
        )
    terms.append(PhaseTerm("psi_prime", 1, lin=(2, n), inv=None, den_m=((2, n),)))
    terms.append(PhaseTerm("psi_prime", n, lin=(1, n), inv=(n, n), den_m=((1, n),)))
    terms.append(
        PhaseTerm(
            "psi_prime",
            n,
            lin=(1, n - 1),
            inv=None,
            num_m=((n, n),),
            den_m=((1, n - 1), (1, n)),
        )
    )
    return terms


def _blockswap_terms(n: int) -> list[PhaseTerm]:
    assert n == 3
    return [
        PhaseTerm("psi", 1, lin=(2, 2), inv=(1, 2), den_m=((1, 2),)),
        PhaseTerm("psi", 1, lin=(2, 3), inv=(1, 3), num_m=((2, 2),), den_m=((1, 2), (1, 3))),
        PhaseTerm("psi", 2, lin=None, inv=(2, 2), den_m=((2, 2),)),
        PhaseTerm("psi", 3, lin=(2, 2), inv=(2, 3), den_m=((2, 3),)),
        PhaseTerm("psi", 3, lin=(1, 2), inv=(1, 3), num_m=((2, 2),), den_m=((1, 3), (2, 3))),
        PhaseTerm("psi_prime", 2, lin=(1, 3), inv=None, den_m=((1, 3),)),
    ]


def _mixed_terms(n: int) -> list[PhaseTerm]:
    assert n == 3
    return [
        PhaseTerm("psi", 1, lin=None, inv=(1, 1), den_m=((1, 1),)),
        PhaseTerm("psi", 2, lin=(1, 1), inv=(1, 2), den_m=((1, 2),)),
        PhaseTerm("psi", 2, lin=None, inv=(2, 2), num_m=((1, 1),), den_m=((1, 2), (2, 2))),
        PhaseTerm("psi", 3, lin=(1, 2), inv=(1, 3), den_m=((1, 3),)),
        PhaseTerm("psi", 3, lin=(2, 2), inv=(2, 3), num_m=((1, 2),), den_m=((1, 3), (2, 3))),
        PhaseTerm("psi_prime", 2, lin=(2, 3), inv=None, den_m=((2, 3),)),
        PhaseTerm(
            "psi_prime",
            3,
            lin=(1, 1),
            inv=None,
            num_m=((2, 2), (2, 3)),
            den_m=((1, 1), (1, 2), (1, 3)),
        ),
        PhaseTerm(
            "psi_prime", 3, lin=(1, 2), inv=(2, 2), num_m=((2, 3),), den_m=((1, 2), (1, 3))
        ),
        PhaseTerm("psi_prime", 3, lin=(1, 3), inv=(2, 3), den_m=((1, 3),)),
    ]


@lru_cache(maxsize=None)
def phase_terms(w: WeylElement, n: int) -> tuple[PhaseTerm, ...]:
    builder = {
        WeylElement.LONG: _long_terms,
        WeylElement.STAR: _star_terms,
        WeylElement.GL4_BLOCK_SWAP: _blockswap_terms,
        WeylElement.GL4_MIXED: _mixed_terms,
    }[w]
    return tuple(builder(n))


@lru_cache(maxsize=None)
def _inverse_table(p: int, level: int) -> np.ndarray:
    """inv[x] = x^(-1) mod p^level for units; 0 at non-units."""
    mod = p ** level
    table = np.zeros(mod, dtype=np.int64)
    for x in range(mod):
        if x % p != 0:
            table[x] = pow(x, -1, mod)
    return table


# -- component tables --------------------------------------------------------


@dataclass
class StratumTable:
    """Per-point phase components at level M, one array per character slot."""

    m: ExponentMatrix
    p: int
    level: int
    count: int
    # keys ("psi", j) / ("psi_prime", j); values int64 arrays of length count
    components: dict[tuple[str, int], np.ndarray] = field(default_factory=dict)

    def indices(self, chars: CharacterPair) -> np.ndarray:
        mod = self.p ** self.level
        total = np.zeros(self.count, dtype=np.int64)
        for (slot, j), comp in self.components.items():
            coeff = (chars.psi if slot == "psi" else chars.psi_prime)[j - 1] % mod
            if coeff:
                total += coeff * comp % mod
                total %= mod
        return total

    def cyclosum(self, chars: CharacterPair) -> CycloSum:
        mod = self.p ** self.level
        mult = np.bincount(self.indices(chars), minlength=mod)
        return CycloSum(self.p, self.level, mult)


def stratum_table(
    w: WeylElement, m: ExponentMatrix, p: int, budget: int | None = None
) -> StratumTable:
    """Vectorized evaluation of all phase components over C_w(m)."""
    n = m.n
    level = m.height()
    mod = p ** level
    grid = coset_grid(w, m, p, budget)
    count = len(next(iter(grid.values()))) if grid else 1
    sup = set(support(w, n))
    table = StratumTable(m=m, p=p, level=level, count=count)

    def c_array(idx):
        if idx in sup:
            return grid[idx]
        # conventions: c = 1 outside the support
        return None  # treated as the constant 1

    for term in phase_terms(w, n):
        e = sum(m.m(*ij) for ij in term.den_m) - sum(m.m(*ij) for ij in term.num_m)
        if e <= 0:
            continue  # integral term, trivial mod 1
        if e > level:
            raise LevelTooSmall(f"denominator exponent {e} exceeds level {level}")
        if term.inv is not None and term.inv in sup and m.m(*term.inv) == 0:
            continue  # formal inverse 0: drop the summand
        pe = p ** e
        t = np.ones(count, dtype=np.int64)
        if term.lin is not None and c_array(term.lin) is not None:
            t = c_array(term.lin) % pe
        if term.inv is not None and c_array(term.inv) is not None:
            inv = _inverse_table(p, e)
            t = t * inv[c_array(term.inv) % pe] % pe
        contrib = t * (mod // pe) % mod
        key = (term.slot, term.slot_index)
        if key in table.components:
            table.components[key] = (table.components[key] + contrib) % mod
        else:
            table.components[key] = contrib
    return table


# -- partial and full sums ----------------------------------------------------


def partial_kl(
    w: WeylElement,
    m: ExponentMatrix,
    chars: CharacterPair,
    p: int,
    budget: int | None = None,
) -> CycloSum:
    """Exact partial Kloosterman sum over C_w(m)."""
    return stratum_table(w, m, p, budget).cyclosum(chars)


def partial_kl_long(m, chars, p, budget=None):
    return partial_kl(WeylElement.LONG, m, chars, p, budget)


def partial_kl_star(m, chars, p, budget=None):
    return partial_kl(WeylElement.STAR, m, chars, p, budget)


class Admissibility(Enum):
    ADMISSIBLE = "admissible"
    INADMISSIBLE = "inadmissible"
    UNKNOWN = "unknown"


def star_admissible(spec: ModulusSpec, chars: CharacterPair) -> Admissibility:
    """Known well-definedness criterion: r must be an arithmetic progression
    when n >= 3 and p divides no psi_j psi'_j."""
    n = spec.n
    if n <= 2:
        return Admissibility.ADMISSIBLE
    if any((chars.psi[j] * chars.psi_prime[j]) % spec.p == 0 for j in range(n)):
        return Admissibility.UNKNOWN
    diffs = {spec.r[k + 1] - spec.r[k] for k in range(n - 1)}
    return Admissibility.ADMISSIBLE if len(diffs) == 1 else Admissibility.INADMISSIBLE


def character_reduction(
    w: WeylElement, chars: CharacterPair, spec: ModulusSpec
) -> CharacterPair:
    """An equivalent character pair with psi = (1, ..., 1).

    Rescaling each summation variable c_ij by a unit is a bijection of every
    coset ring that preserves the unit constraints, so it leaves each partial
    sum unchanged while multiplying the character arguments by units.  For
    the full-reversal element, column scalings u_1..u_n together with the
    compensating row scalings v_j = 1/u_{j-1} rescale psi_j by u_{j-1}/u_j
    and psi'_i by u_{n+1-i}/u_{n-i} (u_0 = 1); for the order-2 element the
    same family rescales psi'_1 by u_n/u_1 and psi'_n by u_{n-1}, and the
    remaining psi'_j do not enter the phase at all.  Choosing
    u_j = psi_1 * ... * psi_j normalizes psi to all ones.  Requires every
    psi_j to be a unit mod p.
    """
    n = spec.n
    if any(x % spec.p == 0 for x in chars.psi):
        raise NotAUnit("character reduction requires unit psi entries")
    mod = spec.p ** max(sum(spec.r), 1)
    psi = [x % mod for x in chars.psi]
    if w is WeylElement.LONG or n == 1:
        new_prime = tuple(
            chars.psi_prime[i - 1] * psi[n - i] % mod for i in range(1, n + 1)
        )
    elif w is WeylElement.STAR:
        new_prime = list(x % mod for x in chars.psi_prime)
        new_prime[0] = new_prime[0] * math.prod(psi[1:n]) % mod
        new_prime[n - 1] = new_prime[n - 1] * math.prod(psi[: n - 1]) % mod
        new_prime = tuple(new_prime)
    else:
        raise ValueError(f"no character reduction implemented for {w}")
    return CharacterPair((1,) * n, new_prime)


WELL_DEFINEDNESS_UNVERIFIED = "WellDefinednessUnverified"


@dataclass
class KloostermanResult:
    weyl: WeylElement
    spec: ModulusSpec
    chars: CharacterPair
    exact: CycloSum
    complex: ComplexValue
    term_count: int
    strata_breakdown: list[tuple[ExponentMatrix, CycloSum]]
    flags: frozenset[str] = frozenset()

    def to_json(self) -> dict:
        return {
            "weyl": self.weyl.value,
            "p": self.spec.p,
            "r": list(self.spec.r),
            "psi": list(self.chars.psi),
            "psi_prime": list(self.chars.psi_prime),
            "exact": self.exact.reduce().to_json(),
            "complex": {"re": self.complex.re, "im": self.complex.im, "eps": self.complex.eps},
            "term_count": self.term_count,
            "trivial_bound": self.spec.trivial_bound(),
            "strata": [
                {
                    "m": m.to_json(),
                    "exact": s.reduce().to_json(),
                    "complex": {"re": s.eval_complex().re, "im": s.eval_complex().im},
                    "count": s.total_multiplicity(),
                }
                for m, s in self.strata_breakdown
            ],
            "flags": sorted(self.flags),
        }


def kl_full(
    w: WeylElement, spec: ModulusSpec, chars: CharacterPair, budget: int | None = None
) -> KloostermanResult:
    """Sum of partial sums over all strata of M_w(r)."""
    if chars.n != spec.n:
        raise ValueError("character length must equal len(r)")
    level = sum(spec.r)
    total = CycloSum.zero(spec.p, level)
    breakdown = []
    for m in enumerate_strata(w, spec.r):
        s = partial_kl(w, m, chars, spec.p, budget)
        breakdown.append((m, s))
        total = total + s
    flags = set()
    if w is WeylElement.STAR and star_admissible(spec, chars) is not Admissibility.ADMISSIBLE:
        flags.add(WELL_DEFINEDNESS_UNVERIFIED)
    return KloostermanResult(
        weyl=w,
        spec=spec,
        chars=chars,
        exact=total,
        complex=total.eval_complex(),
        term_count=total.total_multiplicity(),
        strata_breakdown=breakdown,
        flags=frozenset(flags),
    )


def kl_long(spec: ModulusSpec, chars: CharacterPair, budget=None) -> KloostermanResult:
    return kl_full(WeylElement.LONG, spec, chars, budget)


def kl_star(spec: ModulusSpec, chars: CharacterPair, budget=None) -> KloostermanResult:
    return kl_full(WeylElement.STAR, spec, chars, budget)


def kl_tables(
    w: WeylElement, spec: ModulusSpec, budget: int | None = None
) -> list[StratumTable]:
    """Precomputed per-stratum component tables, for sweeps over characters."""
    return [stratum_table(w, m, spec.p, budget) for m in enumerate_strata(w, spec.r)]


def kl_from_tables(tables: list[StratumTable], spec: ModulusSpec, chars: CharacterPair) -> CycloSum:
    level = sum(spec.r)
    total = CycloSum.zero(spec.p, level)
    for table in tables:
        total = total + table.cyclosum(chars)
    return total


# -- well-definedness probe ----------------------------------------------------


def _shifted_partial(
    w: WeylElement,
    m: ExponentMatrix,
    chars: CharacterPair,
    p: int,
    shifts: dict[tuple[int, int], int],
    budget: int | None = None,
) -> CycloSum:
    """Exact partial sum with each representative c_ij replaced by
    c_ij + shift_ij * modulus_ij, evaluated through the raw phase formula."""
    from .strata import iterate_cosets

    n = m.n
    level = m.height()
    mod = p ** level
    sup = set(support(w, n))
    terms = phase_terms(w, n)
    total = CycloSum.zero(p, level)
    mult = np.zeros(mod, dtype=np.int64)
    for point in iterate_cosets(w, m, p, budget):
        rep = {
            idx: point[idx] + shifts.get(idx, 0) * p ** modulus_exponent(w, m, idx)
            for idx in point
        }

        def c_of(idx):
            return rep[idx] if idx in sup else 1

        acc = 0
        for term in terms:
            e = sum(m.m(*ij) for ij in term.den_m) - sum(m.m(*ij) for ij in term.num_m)
            if e <= 0:
                continue
            if term.inv is not None and term.inv in sup and m.m(*term.inv) == 0:
                continue
            pe = p ** e
            t = 1
            if term.lin is not None:
                t = c_of(term.lin) % pe
            if term.inv is not None:
                t = t * pow(c_of(term.inv), -1, pe) % pe
            coeff = (chars.psi if term.slot == "psi" else chars.psi_prime)[term.slot_index - 1]
            acc = (acc + coeff * t * (mod // pe)) % mod
        mult[acc] += 1
    total.mult += mult
    return total


def representative_shift_check(
    w: WeylElement,
    m: ExponentMatrix,
    chars: CharacterPair,
    p: int,
    trials: int = 5,
    seed: int = 0,
    budget: int | None = None,
) -> bool:
    """Empirical well-definedness: the partial sum must not depend on the
    choice of representatives for the residues c_ij."""
    rng = Random(seed)
    reference = _shifted_partial(w, m, chars, p, {}, budget)
    canonical = partial_kl(w, m, chars, p, budget)
    if reference != canonical:
        return False
    sup = support(w, m.n)
    for _ in range(trials):
        shifts = {idx: rng.randint(1, 10) for idx in sup}
        if _shifted_partial(w, m, chars, p, shifts, budget) != reference:
            return False
    return True
