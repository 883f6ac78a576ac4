from random import Random

import pytest

from kloosterman.cyclosum import CycloSum
from kloosterman.gl4 import Gl4Weyl, gl4_bound_report, gl4_full, gl4_partial
from kloosterman.klsums import CharacterPair, kl_long, kl_star
from kloosterman.strata import ExponentMatrix, ModulusSpec, WeylElement

UNITS3 = CharacterPair.units(3)


def test_long_and_star_match_general_evaluators():
    rng = Random(8)
    for _ in range(6):
        p = rng.choice((2, 3))
        spec = ModulusSpec(p, tuple(rng.randrange(2) for _ in range(3)))
        chars = CharacterPair(
            tuple(rng.randrange(p) for _ in range(3)),
            tuple(rng.randrange(p) for _ in range(3)),
        )
        assert gl4_full(Gl4Weyl.LONG_GL4, spec, chars).exact == kl_long(spec, chars).exact
        assert gl4_full(Gl4Weyl.STAR_GL4, spec, chars).exact == kl_star(spec, chars).exact


def test_block_swap_zero_modulus_is_one():
    res = gl4_full(Gl4Weyl.BLOCK_SWAP, ModulusSpec(3, (0, 0, 0)), UNITS3)
    assert res.exact == CycloSum.constant(3, 1)


def test_star_single_corner_stratum():
    m = ExponentMatrix(3, WeylElement.STAR, {(1, 3): 1})
    s = gl4_partial(Gl4Weyl.STAR_GL4, m, UNITS3, 5)
    assert s == CycloSum.constant(5, 25, 2)


def test_bound_report_examples():
    rep = gl4_bound_report(Gl4Weyl.LONG_GL4, ModulusSpec(3, (1, 1, 1)), UNITS3)
    assert rep["value_abs"] == pytest.approx(4.0)
    assert rep["trivial_bound"] == 27
    assert rep["ratio"] == pytest.approx(0.4206, abs=1e-4)
    rep = gl4_bound_report(Gl4Weyl.STAR_GL4, ModulusSpec(5, (1, 1, 1)), UNITS3)
    assert rep["value_abs"] == pytest.approx(30.0)
    assert rep["trivial_bound"] == 125
    zero = gl4_bound_report(Gl4Weyl.MIXED, ModulusSpec(3, (1, 0, 1)), UNITS3)
    assert zero["exact_zero"] and zero["ratio"] is None


def test_mixed_companion_runs_and_obeys_trivial_bound():
    rng = Random(12)
    for _ in range(8):
        p = rng.choice((2, 3))
        spec = ModulusSpec(p, tuple(rng.randrange(2) for _ in range(3)))
        chars = CharacterPair(
            tuple(rng.randrange(p) for _ in range(3)),
            tuple(rng.randrange(p) for _ in range(3)),
        )
        for companion in (False, True):
            res = gl4_full(Gl4Weyl.MIXED, spec, chars, companion=companion)
            assert abs(res.complex) <= spec.trivial_bound() + res.complex.eps


def test_companion_only_for_mixed():
    with pytest.raises(ValueError):
        gl4_full(Gl4Weyl.LONG_GL4, ModulusSpec(3, (1, 1, 1)), UNITS3, companion=True)


def test_requires_n3():
    with pytest.raises(ValueError):
        gl4_full(Gl4Weyl.BLOCK_SWAP, ModulusSpec(3, (1, 1)), CharacterPair.units(2))
    with pytest.raises(ValueError):
        gl4_partial(
            Gl4Weyl.MIXED,
            ExponentMatrix(2, WeylElement.LONG, {(1, 1): 1}),
            CharacterPair.units(2),
            3,
        )
