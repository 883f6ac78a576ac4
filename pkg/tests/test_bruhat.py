from fractions import Fraction
from random import Random

import pytest

from kloosterman.bruhat import (
    PadicParam,
    b_beta,
    b_product,
    b_word_product,
    bruhat_decompose,
    closed_form_triple,
    coset_representative_params,
    identity,
    is_p_integral,
    mat_mul,
    random_coset_point,
    reduced_word,
    triple_product,
)
from kloosterman.errors import BadIndex, LengthMismatch
from kloosterman.strata import ExponentMatrix, WeylElement, support


def em(n, w, entries):
    return ExponentMatrix(n, w, entries)


def det(mat):
    mat = [row[:] for row in mat]
    d = len(mat)
    result = Fraction(1)
    for col in range(d):
        pivot = next((r for r in range(col, d) if mat[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            result = -result
        result *= mat[col][col]
        inv = Fraction(1) / mat[col][col]
        for r in range(col + 1, d):
            f = mat[r][col] * inv
            for k in range(col, d):
                mat[r][k] -= f * mat[col][k]
    return result


def test_b_beta_integral_cases():
    g = b_beta(1, PadicParam(7, 0), 1, 3)
    assert is_p_integral(g, 3)
    assert det(g) in (1, -1)
    g = b_beta(1, PadicParam(2, 1), 2, 3)  # a = 2/3 inside GL(3)
    assert is_p_integral(g, 3)
    assert len(g) == 3
    with pytest.raises(BadIndex):
        b_beta(3, PadicParam(1, 0), 2, 3)


def test_b_product_examples():
    single = b_product([1], [PadicParam(2, 1)], 1, 3)
    assert single == b_beta(1, PadicParam(2, 1), 1, 3)
    word = [1, 2, 1]
    params = [PadicParam(1, 1), PadicParam(2, 1), PadicParam(1, 0)]
    g = b_product(word, params, 2, 3)
    assert is_p_integral(g, 3)
    with pytest.raises(LengthMismatch):
        b_product([1, 2], [PadicParam(1, 0)], 2, 3)


def test_reduced_words():
    long2 = reduced_word(WeylElement.LONG, 2)
    assert [beta for beta, _ in long2] == [1, 2, 1]
    assert [label for _, label in long2] == [(1, 1), (1, 2), (2, 2)]
    long3 = reduced_word(WeylElement.LONG, 3)
    assert len(long3) == 6
    star3 = reduced_word(WeylElement.STAR, 3)
    assert [beta for beta, _ in star3] == [1, 2, 3, 2, 1]
    assert len(star3) == 2 * 3 - 1
    bs = reduced_word(WeylElement.GL4_BLOCK_SWAP, 3)
    assert [beta for beta, _ in bs] == [2, 1, 3, 2]
    assert [label for _, label in bs] == [(2, 2), (1, 2), (2, 3), (1, 3)]
    mixed = reduced_word(WeylElement.GL4_MIXED, 3)
    assert [beta for beta, _ in mixed] == [1, 2, 3, 1, 2]
    assert [label for _, label in mixed] == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)]


def test_decompose_identity_and_monomial():
    eye = identity(3)
    t = bruhat_decompose(eye)
    assert (t.L, t.N, t.R) == (eye, eye, eye)
    anti = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    anti = [[Fraction(x) for x in row] for row in anti]
    t = bruhat_decompose(anti)
    assert t.L == identity(3) and t.R == identity(3) and t.N == anti


def test_decompose_round_trip_random():
    rng = Random(17)
    for _ in range(40):
        n = rng.choice((1, 2, 3))
        d = n + 1
        g = [[Fraction(rng.randrange(-4, 5)) for _ in range(d)] for _ in range(d)]
        if det(g) == 0:
            continue
        t = bruhat_decompose(g)
        assert triple_product(t) == g
        # unitriangular shape
        for i in range(d):
            assert t.L[i][i] == 1 and t.R[i][i] == 1
            for j in range(i):
                assert t.L[i][j] == 0 and t.R[i][j] == 0


def test_closed_form_n1():
    m = em(1, WeylElement.LONG, {(1, 1): 2})
    t = closed_form_triple(WeylElement.LONG, m, {(1, 1): 7}, 3)
    assert abs(t.N[0][1]) == Fraction(1, 9)
    assert t.N[1][0] == 9


def test_closed_form_agreement_positive_exponents():
    rng = Random(77)
    for _ in range(60):
        n = rng.choice((1, 2, 3))
        p = rng.choice((2, 3, 5))
        w = WeylElement.LONG if n == 1 else rng.choice((WeylElement.LONG, WeylElement.STAR))
        m = em(n, w, {idx: rng.randint(1, 2) for idx in support(w, n)})
        point = random_coset_point(w, m, p, rng)
        params = {idx: PadicParam(point[idx], m.m(*idx)) for idx in point}
        g = b_word_product(w, params, n, p)
        assert is_p_integral(g, p)
        t = bruhat_decompose(g)
        closed = closed_form_triple(w, m, point, p)
        assert (closed.L, closed.N, closed.R) == (t.L, t.N, t.R)


def test_coset_representative_params_word_order_and_injectivity():
    rng = Random(4)
    w = WeylElement.LONG
    m = em(2, w, {(1, 1): 1, (1, 2): 1, (2, 2): 1})
    seen = set()
    for _ in range(10):
        point = random_coset_point(w, m, 3, rng)
        params = coset_representative_params(w, m, point)
        assert len(params) == 3
        assert [q.m for q in params] == [1, 1, 1]
        seen.add(tuple((q.c, q.m) for q in params))
    assert len(seen) > 1  # distinct points give distinct vectors


def test_representative_inequivalence():
    """Distinct coset points are not related by an integral unipotent on the
    right: u = R1^{-1} R2 always has a p in some denominator."""

    def u_solve(r1, r2):
        d = len(r1)
        u = [[Fraction(0)] * d for _ in range(d)]
        for col in range(d):
            for row in range(d - 1, -1, -1):
                s = r2[row][col]
                for k in range(row + 1, d):
                    s -= r1[row][k] * u[k][col]
                u[row][col] = s
        return u

    rng = Random(11)
    checked = 0
    while checked < 50:
        p = rng.choice((2, 3, 5))
        w = WeylElement.LONG
        m = em(2, w, {idx: rng.randint(1, 2) for idx in support(w, 2)})
        pt1 = random_coset_point(w, m, p, rng)
        pt2 = random_coset_point(w, m, p, rng)
        if pt1 == pt2:
            continue
        triples = []
        for pt in (pt1, pt2):
            params = {idx: PadicParam(pt[idx], m.m(*idx)) for idx in pt}
            triples.append(bruhat_decompose(b_word_product(w, params, 2, p)))
        u = u_solve(triples[0].R, triples[1].R)
        assert any(x.denominator % p == 0 for row in u for x in row)
        checked += 1


def test_mat_mul_identity():
    g = b_beta(1, PadicParam(1, 1), 2, 5)
    assert mat_mul(identity(3), g) == g
