"""GL(4) (n = 3): all four nontrivial Weyl-element families in one place.

The long and order-2 elements are the n = 3 specializations of the general
evaluators; the block-swap and mixed elements have their own supports, coset
moduli and phase tables (registered in strata/klsums).  The mixed element's
transpose-dual companion is exposed through a flag: conjugation by the long
element maps its sum to the mixed sum with both character vectors reversed
and swapped and the modulus vector reversed.
"""

from __future__ import annotations

from enum import Enum

from .cyclosum import CycloSum
from .klsums import CharacterPair, KloostermanResult, kl_full, partial_kl
from .strata import ExponentMatrix, ModulusSpec, WeylElement


class Gl4Weyl(Enum):
    LONG_GL4 = "long"
    STAR_GL4 = "star"
    BLOCK_SWAP = "blockswap"
    MIXED = "mixed"

    @property
    def weyl(self) -> WeylElement:
        return WeylElement(self.value)


def _require_n3(spec_n: int):
    if spec_n != 3:
        raise ValueError("GL(4) evaluators require n = 3")


def gl4_partial(
    w: Gl4Weyl,
    m: ExponentMatrix,
    chars: CharacterPair,
    p: int,
    budget: int | None = None,
) -> CycloSum:
    _require_n3(m.n)
    return partial_kl(w.weyl, m, chars, p, budget)


def gl4_full(
    w: Gl4Weyl,
    spec: ModulusSpec,
    chars: CharacterPair,
    budget: int | None = None,
    companion: bool = False,
) -> KloostermanResult:
    """Full GL(4) sum; companion=True evaluates the transpose-dual of MIXED."""
    _require_n3(spec.n)
    if companion:
        if w is not Gl4Weyl.MIXED:
            raise ValueError("the companion flag applies to the mixed element only")
        dual_spec = ModulusSpec(spec.p, spec.r[::-1])
        dual_chars = CharacterPair(chars.psi_prime[::-1], chars.psi[::-1])
        return kl_full(w.weyl, dual_spec, dual_chars, budget)
    return kl_full(w.weyl, spec, chars, budget)


def gl4_bound_report(
    w: Gl4Weyl,
    spec: ModulusSpec,
    chars: CharacterPair,
    budget: int | None = None,
) -> dict:
    """|value|, the trivial bound p^(r1+r2+r3), and log_p|value| / sum(r)."""
    import math

    result = gl4_full(w, spec, chars, budget)
    value_abs = abs(result.complex)
    trivial = spec.trivial_bound()
    total_r = sum(spec.r)
    if value_abs <= result.complex.eps or total_r == 0:
        ratio = None  # -infinity sentinel: exact zero, or empty modulus
    else:
        ratio = math.log(value_abs, spec.p) / total_r
    return {
        "weyl": w.value,
        "p": spec.p,
        "r": list(spec.r),
        "value_abs": value_abs,
        "trivial_bound": trivial,
        "ratio": ratio,
        "exact_zero": result.exact.is_zero(),
    }
