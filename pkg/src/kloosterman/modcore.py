"""Exact arithmetic over Z/p^k Z and rationals with p-power denominators.

Everything here is plain integer arithmetic with arbitrary precision; no
floating point and no convention magic (the "inverse of a residue with
exponent 0 is dropped" rule lives in the sum-assembly layer, not here).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .errors import BadIndex, NotAUnit, ZeroInput, ZeroModulus

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3 * 10^24 (covers 2^64)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimePower:
    """p^k for a prime p and exponent k >= 0."""

    p: int
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"negative exponent {self.k}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def value(self) -> int:
        return self.p ** self.k


@dataclass(frozen=True)
class ResidueClass:
    """A residue 0 <= value < modulus.value."""

    value: int
    modulus: PrimePower

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.value:
            raise ValueError(f"residue {self.value} out of range for {self.modulus}")


@dataclass(frozen=True)
class FracExponent:
    """The rational t / p^e taken modulo 1, in canonical form 0 <= t < p^e."""

    p: int
    t: int
    e: int

    def __post_init__(self):
        if self.e < 0:
            raise ValueError("negative denominator exponent")

    @staticmethod
    def make(p: int, t: int, e: int) -> "FracExponent":
        """Canonicalize an arbitrary integer numerator."""
        return FracExponent(p, t % p ** e, e)

    def embed(self, level: int) -> int:
        """Index of this exponent among p^level-th roots: t * p^(level-e) mod p^level."""
        if level < self.e:
            raise ValueError(f"level {level} below denominator exponent {self.e}")
        return self.t * self.p ** (level - self.e) % self.p ** level

    def __add__(self, other: "FracExponent") -> "FracExponent":
        if self.p != other.p:
            raise ValueError("prime mismatch")
        e = max(self.e, other.e)
        pe = self.p ** e
        t = (self.t * self.p ** (e - self.e) + other.t * self.p ** (e - other.e)) % pe
        return FracExponent(self.p, t, e)


def mod_inverse(c: ResidueClass) -> ResidueClass:
    """Inverse of a unit mod p^k.  Total on units; never applies the m=0 convention."""
    p, k = c.modulus.p, c.modulus.k
    if k == 0:
        raise ZeroModulus("inverse mod p^0 is a formula-layer convention, not arithmetic")
    if c.value % p == 0:
        raise NotAUnit(f"{c.value} is divisible by {p}")
    return ResidueClass(pow(c.value, -1, c.modulus.value), c.modulus)


def p_valuation(x: int, p: int) -> int:
    """Largest v with p^v | x, for x != 0."""
    if x == 0:
        raise ZeroInput("valuation of 0 is +infinity")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class HalfPower:
    """p^(half_exp / 2), kept exact as a (base, half-integer exponent) pair."""

    p: int
    half_exp: int

    def value(self) -> float:
        return float(self.p) ** (self.half_exp / 2)


def psi_p_factor(psi_j: int, p: int) -> HalfPower:
    """The bound factor |psi_j|_p^{-1/2} = p^{v_p(psi_j)/2}."""
    if psi_j == 0:
        raise ZeroInput("character entry 0 has no p-part")
    return HalfPower(p, p_valuation(psi_j, p))


def unit_range(modulus: PrimePower, unit_level: PrimePower) -> Iterator[ResidueClass]:
    """All residues mod p^k coprime to p^(unit_level.k); everything when that is p^0."""
    if unit_level.p != modulus.p:
        raise BadIndex("unit_level and modulus must share p")
    if unit_level.k > modulus.k:
        raise BadIndex("unit_level exceeds modulus")
    p = modulus.p
    need_unit = unit_level.k >= 1
    for c in range(modulus.value):
        if need_unit and c % p == 0:
            continue
        yield ResidueClass(c, modulus)


def residue_count(modulus_exp: int, unit: bool, p: int) -> int:
    """|{0 <= c < p^modulus_exp : unit => gcd(c, p) = 1}| as an exact integer."""
    total = p ** modulus_exp
    if unit:
        if modulus_exp == 0:
            raise ValueError("unit constraint with empty modulus")
        total = total // p * (p - 1)
    return total


def divisor_count(c: int) -> int:
    """tau(c) by trial division; c is desk scale."""
    if c < 1:
        raise ValueError("positive integers only")
    tau = 1
    d = 2
    while d * d <= c:
        if c % d == 0:
            e = 0
            while c % d == 0:
                c //= d
                e += 1
            tau *= e + 1
        d += 1
    if c > 1:
        tau *= 2
    return tau


def euler_phi(c: int) -> int:
    if c < 1:
        raise ValueError("positive integers only")
    result = c
    d = 2
    while d * d <= c:
        if c % d == 0:
            while c % d == 0:
                c //= d
            result -= result // d
        d += 1
    if c > 1:
        result -= result // c
    return result


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1
