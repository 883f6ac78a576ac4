import numpy as np
import pytest
from hypothesis import given, strategies as st

from kloosterman.cyclosum import ComplexValue, CycloSum, MAX_ARRAY
from kloosterman.errors import LevelTooSmall, PrimeMismatch
from kloosterman.modcore import FracExponent


def roots(p, level, *numerators):
    out = CycloSum.zero(p, level)
    for t in numerators:
        out = out + CycloSum.root_of_unity(FracExponent.make(p, t, level), level)
    return out


@st.composite
def cyclosums(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    level = draw(st.integers(0, 3))
    mult = draw(
        st.lists(st.integers(-5, 5), min_size=p ** level, max_size=p ** level)
    )
    return CycloSum(p, level, mult)


def test_root_of_unity_examples():
    one = CycloSum.root_of_unity(FracExponent(3, 0, 0), 2)
    assert one == CycloSum.constant(3, 1)
    half = CycloSum.root_of_unity(FracExponent(2, 1, 1), 1)
    assert half.eval_complex().close_to(-1)
    thirds = roots(3, 1, 1, 2)
    assert thirds.eval_complex().close_to(-1)
    assert thirds == CycloSum.constant(3, -1)


def test_root_of_unity_level_guard():
    with pytest.raises(LevelTooSmall):
        CycloSum.root_of_unity(FracExponent(3, 1, 3), 2)


def test_dense_array_guard():
    with pytest.raises(LevelTooSmall):
        CycloSum.zero(2, 24)
    assert 2 ** 23 <= MAX_ARRAY


def test_add_examples():
    a = roots(5, 1, 1, 2)
    assert a + CycloSum.zero(5, 1) == a
    full = roots(5, 1, 1, 2, 3, 4)
    assert full.eval_complex().close_to(-1)
    assert full == CycloSum.constant(5, -1)
    s113 = roots(3, 1, 2, 1)  # classical sum of modulus 3 assembled termwise
    assert s113.eval_complex().close_to(-1)


def test_add_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        CycloSum.zero(2, 1) + CycloSum.zero(3, 1)


def test_add_level_embedding():
    a = CycloSum.constant(3, 2, level=0)
    b = roots(3, 2, 1)
    c = a + b
    assert c.level == 2
    assert c.mult[0] == 2 and c.mult[1] == 1


def test_reduce_examples():
    vanishing = CycloSum.constant(3, 1, 1) + roots(3, 1, 1, 2)
    assert vanishing.reduce().mult.tolist() == [0, 0, 0]
    assert vanishing.is_zero()
    single = roots(5, 2, 1)
    assert np.array_equal(single.reduce().mult, single.mult)
    seven = (CycloSum.constant(2, 1, 1) + roots(2, 1, 1)).scale(7)
    assert seven.is_zero()


def test_reduce_canonical_invariant():
    rng = np.random.default_rng(0)
    for p, level in [(2, 3), (3, 2), (5, 1)]:
        mult = rng.integers(-9, 9, size=p ** level)
        top = CycloSum(p, level, mult).reduce().mult[(p - 1) * p ** (level - 1):]
        assert not top.any()


@given(cyclosums())
def test_reduce_idempotent(a):
    once = a.reduce()
    assert np.array_equal(once.mult, once.reduce().mult)


@given(cyclosums())
def test_reduce_preserves_value(a):
    x, y = a.eval_complex(), a.reduce().eval_complex()
    assert abs(complex(x.re, x.im) - complex(y.re, y.im)) <= x.eps + y.eps + 1e-12


@given(cyclosums(), cyclosums())
def test_add_commutes_with_reduce(a, b):
    if a.p != b.p:
        return
    lhs = (a + b).reduce()
    rhs = (a.reduce() + b.reduce()).reduce()
    assert np.array_equal(lhs.mult, rhs.mult)
    assert a + b == b + a


def test_eval_complex_examples():
    z = CycloSum.zero(3, 2).eval_complex()
    assert (z.re, z.im, z.eps) == (0.0, 0.0, 0.0)
    i = CycloSum.root_of_unity(FracExponent(2, 1, 2), 2).eval_complex()
    assert i.close_to(1j)
    assert abs(ComplexValue(3.0, 4.0, 0.0)) == 5.0


def test_equality_across_levels():
    a = CycloSum.constant(3, 4, level=0)
    b = CycloSum.constant(3, 4, level=2)
    assert a == b
    assert not (a == CycloSum.constant(3, 5, level=1))
    assert not (a == CycloSum.constant(2, 4, level=0))


def test_hash_refused():
    with pytest.raises(TypeError):
        hash(CycloSum.zero(2, 1))


@given(cyclosums())
def test_json_round_trip(a):
    back = CycloSum.from_json(a.to_json())
    assert back.p == a.p and back.level == a.level
    assert np.array_equal(back.mult, a.mult)


def test_scale_and_total_multiplicity():
    a = roots(3, 1, 0, 1, 2)
    assert a.total_multiplicity() == 3
    assert a.scale(-2).total_multiplicity() == -6
