import itertools

import pytest

from kloosterman.errors import BadIndex, BudgetExceeded, NotInStratum
from kloosterman.strata import (
    ExponentMatrix,
    ModulusSpec,
    WeylElement,
    coset_cardinality,
    dr_count,
    enumerate_strata,
    iterate_cosets,
    modulus_exponent,
    support,
)


def em(n, w, entries):
    return ExponentMatrix(n, w, entries)


def r_vectors(n, total_max):
    for total in range(total_max + 1):
        for r in itertools.product(range(total + 1), repeat=n):
            if sum(r) == total:
                yield r


def brute_force_strata(w, r):
    """Independent solver: bounded product search over the support."""
    n = len(r)
    sup = support(w, n)
    bounds = []
    for (i, j) in sup:
        ks = [k for k in range(1, n + 1) if i <= k <= j]
        bounds.append(min(r[k - 1] for k in ks) if ks else 0)
    out = set()
    for values in itertools.product(*[range(b + 1) for b in bounds]):
        m = dict(zip(sup, values))
        ok = all(
            sum(v for (i, j), v in m.items() if i <= k <= j) == r[k - 1]
            for k in range(1, n + 1)
        )
        if ok:
            out.add(tuple(values))
    return out


def test_enumerate_examples():
    assert [m.flat() for m in enumerate_strata(WeylElement.LONG, (3,))] == [(3,)]
    flats = {m.flat() for m in enumerate_strata(WeylElement.LONG, (1, 1))}
    assert flats == {(1, 0, 1), (0, 1, 0)}
    star = enumerate_strata(WeylElement.STAR, (1, 1, 1))
    as_dicts = [
        {idx: m.m(*idx) for idx in support(WeylElement.STAR, 3) if m.m(*idx)}
        for m in star
    ]
    assert {frozenset(d.items()) for d in as_dicts} == {
        frozenset({((1, 3), 1)}.items() if False else {(1, 3): 1}.items()),
        frozenset({(1, 1): 1, (2, 3): 1}.items()),
        frozenset({(1, 2): 1, (3, 3): 1}.items()),
    }


def test_enumerate_sorted_and_unique():
    for w in (WeylElement.LONG, WeylElement.STAR):
        for r in [(2, 1), (1, 2, 1), (0, 3, 0)]:
            flats = [m.flat() for m in enumerate_strata(w, r)]
            assert flats == sorted(flats)
            assert len(flats) == len(set(flats))


def test_enumerate_against_independent_search():
    for n in (1, 2, 3):
        elements = [WeylElement.LONG]
        if n >= 2:
            elements.append(WeylElement.STAR)
        if n == 3:
            elements += [WeylElement.GL4_BLOCK_SWAP, WeylElement.GL4_MIXED]
        for w in elements:
            for r in r_vectors(n, 6):
                got = {m.flat() for m in enumerate_strata(w, r)}
                assert got == brute_force_strata(w, r), (w, r)


def test_exponent_matrix_conventions():
    m = em(2, WeylElement.LONG, {(1, 1): 1, (1, 2): 0, (2, 2): 1})
    assert m.m(2, 1) == 0  # below the diagonal reads as zero
    assert m.m(5, 7) == 0  # off-support reads as zero
    assert m.row_sums() == (1, 1)
    assert m.height() == 2
    assert m.kappa() == 2
    with pytest.raises((BadIndex, ValueError)):
        em(2, WeylElement.LONG, {(2, 1): 1})
    with pytest.raises(ValueError):
        em(2, WeylElement.LONG, {(1, 1): -1})


def test_modulus_spec():
    spec = ModulusSpec(3, (1, 2))
    assert spec.n == 2
    assert spec.trivial_bound() == 27
    with pytest.raises(Exception):
        ModulusSpec(4, (1,))


def test_coset_cardinality_examples():
    m = em(2, WeylElement.LONG, {(1, 1): 1, (1, 2): 0, (2, 2): 1})
    assert coset_cardinality(WeylElement.LONG, m, 3) == 4
    zero = em(2, WeylElement.LONG, {})
    assert coset_cardinality(WeylElement.LONG, zero, 5) == 1
    for r in [(1, 1), (2, 0), (1, 2)]:
        for mm in enumerate_strata(WeylElement.LONG, r):
            assert coset_cardinality(WeylElement.LONG, mm, 3) <= 3 ** sum(r)


def test_dr_count_examples():
    m = em(2, WeylElement.LONG, {(1, 1): 1, (2, 2): 1})
    assert dr_count(m, (1, 1), 3) == 4
    assert dr_count(em(1, WeylElement.LONG, {}), (0,), 7) == 1
    assert dr_count(em(1, WeylElement.LONG, {(1, 1): 2}), (2,), 5) == 20
    with pytest.raises(NotInStratum):
        dr_count(m, (1, 2), 3)


def test_counting_formula_agreement():
    for n in (1, 2, 3):
        for w in ([WeylElement.LONG, WeylElement.STAR] if n >= 2 else [WeylElement.LONG]):
            for r in r_vectors(n, 4):
                for m in enumerate_strata(w, r):
                    for p in (2, 3):
                        assert coset_cardinality(w, m, p) == dr_count(m, r, p)


def test_iterate_cosets_examples():
    m = em(1, WeylElement.LONG, {(1, 1): 1})
    points = list(iterate_cosets(WeylElement.LONG, m, 3))
    assert [pt[(1, 1)] for pt in points] == [1, 2]

    m = em(2, WeylElement.LONG, {(1, 2): 1})
    points = list(iterate_cosets(WeylElement.LONG, m, 2))
    assert len(points) == 2
    assert sorted(pt[(1, 1)] for pt in points) == [0, 1]
    assert all(pt[(1, 2)] == 1 for pt in points)
    assert all(pt[(2, 2)] == 0 for pt in points)


def test_iterate_cosets_count_matches_cardinality():
    for r in [(1, 1), (2, 1)]:
        for m in enumerate_strata(WeylElement.LONG, r):
            pts = list(iterate_cosets(WeylElement.LONG, m, 3))
            assert len(pts) == coset_cardinality(WeylElement.LONG, m, 3)
            assert len({tuple(sorted(pt.items())) for pt in pts}) == len(pts)


def test_budget_guard():
    m = em(1, WeylElement.LONG, {(1, 1): 6})
    with pytest.raises(BudgetExceeded) as info:
        list(iterate_cosets(WeylElement.LONG, m, 5, 100))
    assert info.value.required == 12500


def test_modulus_exponents():
    m = em(3, WeylElement.LONG, {(1, 1): 1, (1, 2): 2, (1, 3): 3, (2, 2): 1})
    # row i entry (i, j) accumulates the tail of row i from column j onward
    assert modulus_exponent(WeylElement.LONG, m, (1, 1)) == 6
    assert modulus_exponent(WeylElement.LONG, m, (1, 2)) == 5
    assert modulus_exponent(WeylElement.LONG, m, (1, 3)) == 3
    assert modulus_exponent(WeylElement.LONG, m, (2, 2)) == 1

    ms = em(3, WeylElement.STAR, {(1, 1): 1, (1, 2): 2, (2, 3): 1, (3, 3): 2})
    assert modulus_exponent(WeylElement.STAR, ms, (1, 1)) == 3
    assert modulus_exponent(WeylElement.STAR, ms, (2, 3)) == 1
    assert modulus_exponent(WeylElement.STAR, ms, (3, 3)) == 3

    mb = em(3, WeylElement.GL4_BLOCK_SWAP, {(1, 2): 1, (1, 3): 1, (2, 2): 1, (2, 3): 1})
    assert modulus_exponent(WeylElement.GL4_BLOCK_SWAP, mb, (2, 2)) == 3
    assert modulus_exponent(WeylElement.GL4_BLOCK_SWAP, mb, (1, 2)) == 2
    assert modulus_exponent(WeylElement.GL4_BLOCK_SWAP, mb, (2, 3)) == 2
    assert modulus_exponent(WeylElement.GL4_BLOCK_SWAP, mb, (1, 3)) == 1

    mx = em(3, WeylElement.GL4_MIXED, {(1, 1): 1, (1, 2): 1, (1, 3): 1, (2, 2): 1, (2, 3): 1})
    assert modulus_exponent(WeylElement.GL4_MIXED, mx, (1, 1)) == 3
    assert modulus_exponent(WeylElement.GL4_MIXED, mx, (2, 2)) == 2
    assert modulus_exponent(WeylElement.GL4_MIXED, mx, (1, 3)) == 1


def test_supports():
    assert support(WeylElement.LONG, 2) == [(1, 1), (1, 2), (2, 2)]
    assert set(support(WeylElement.STAR, 3)) == {(1, 1), (1, 2), (1, 3), (2, 3), (3, 3)}
    assert set(support(WeylElement.GL4_BLOCK_SWAP, 3)) == {(2, 2), (1, 2), (2, 3), (1, 3)}
    assert set(support(WeylElement.GL4_MIXED, 3)) == {(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)}
