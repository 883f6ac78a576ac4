"""Exact evaluation and verification of Kloosterman sums on GL(n+1).

Core objects: exact cyclotomic-integer sums (CycloSum), Weyl-element
stratifications (strata), the stratified sum evaluators (klsums, gl4),
classical oracles (classical), exact-rational Bruhat machinery (bruhat),
and bound scans (bounds).  A FastAPI service (service) and a CLI (cli)
wrap the library.
"""

from .cyclosum import ComplexValue, CycloSum
from .errors import (
    BadIndex,
    BudgetExceeded,
    KloostermanError,
    LengthMismatch,
    LevelTooSmall,
    NotAUnit,
    NotInStratum,
    PrimeMismatch,
    SingularMatrix,
    ZeroInput,
    ZeroModulus,
)
from .klsums import (
    Admissibility,
    CharacterPair,
    KloostermanResult,
    character_reduction,
    kl_full,
    kl_long,
    kl_star,
    partial_kl,
    partial_kl_long,
    partial_kl_star,
    representative_shift_check,
    star_admissible,
)
from .strata import (
    ExponentMatrix,
    ModulusSpec,
    WeylElement,
    coset_cardinality,
    dr_count,
    enumerate_strata,
)

__version__ = "1.0.0"

__all__ = [
    "Admissibility",
    "BadIndex",
    "BudgetExceeded",
    "CharacterPair",
    "ComplexValue",
    "CycloSum",
    "ExponentMatrix",
    "KloostermanError",
    "KloostermanResult",
    "LengthMismatch",
    "LevelTooSmall",
    "ModulusSpec",
    "NotAUnit",
    "NotInStratum",
    "PrimeMismatch",
    "SingularMatrix",
    "WeylElement",
    "ZeroInput",
    "ZeroModulus",
    "character_reduction",
    "coset_cardinality",
    "dr_count",
    "enumerate_strata",
    "kl_full",
    "kl_long",
    "kl_star",
    "partial_kl",
    "partial_kl_long",
    "partial_kl_star",
    "representative_shift_check",
    "star_admissible",
]
