"""Exact-rational Bruhat machinery: b_beta(a) generators, reduced-word
products, LNR decompositions, and the closed-form triples they must match.

All arithmetic is over fractions.Fraction.  The p-adic parameter a = c p^-m
(with gcd(c, p) = 1 when m >= 1) enters through the fixed generator

    b_beta(c p^-m) = [[1/c, 0], [p^m, c]]   (m >= 1)
    b_beta(c)      = [[0, -1], [1,  c]]     (m  = 0)

embedded at rows/columns (beta, beta + 1).  This is the representative
normalization whose toral part has positive bottom-row minors; the signs of
the closed-form N entries below are stated for exactly this choice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadIndex, LengthMismatch, SingularMatrix
from .modcore import p_valuation
from .strata import ExponentMatrix, WeylElement, modulus_exponent, support

Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class PadicParam:
    """a = c * p^-m with gcd(c, p^m) = 1 for m >= 1 (c may be anything at m=0)."""

    c: int
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be >= 0")


@dataclass
class BruhatTriple:
    L: Matrix  # upper unitriangular
    N: Matrix  # monomial
    R: Matrix  # upper unitriangular


def identity(d: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    d = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)] for i in range(d)]


def is_p_integral(g: Matrix, p: int) -> bool:
    for row in g:
        for x in row:
            if x != 0 and p_valuation(x.denominator, p) > 0:
                return False
    return True


def b_beta(beta_index: int, a: PadicParam, n: int, p: int) -> Matrix:
    """Generator for the simple reflection at beta_index, embedded in GL(n+1)."""
    if not 1 <= beta_index <= n:
        raise BadIndex(f"beta index {beta_index} not in 1..{n}")
    g = identity(n + 1)
    i = beta_index - 1
    if a.m >= 1:
        if a.c % p == 0:
            raise ValueError("c must be a unit when m >= 1")
        block = [[Fraction(1, a.c), Fraction(0)], [Fraction(p ** a.m), Fraction(a.c)]]
    else:
        block = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(a.c)]]
    for r in range(2):
        for cix in range(2):
            g[i + r][i + cix] = block[r][cix]
    return g


def reduced_word(w: WeylElement, n: int) -> list[tuple[int, tuple[int, int]]]:
    """The fixed reduced word as (simple index, parameter label (i, j)) pairs."""
    if w is WeylElement.LONG:
        word = []
        for t in range(1, n + 1):
            for k in range(1, n + 2 - t):
                word.append((k, (t, t - 1 + k)))
        return word
    if w is WeylElement.STAR:
        if n < 2:
            raise ValueError("order-2 element needs n >= 2")
        word = [(k, (1, k)) for k in range(1, n + 1)]
        word += [(n - i, (n + 1 - i, n)) for i in range(1, n)]
        return word
    if w is WeylElement.GL4_BLOCK_SWAP:
        return [(2, (2, 2)), (1, (1, 2)), (3, (2, 3)), (2, (1, 3))]
    if w is WeylElement.GL4_MIXED:
        return [(1, (1, 1)), (2, (1, 2)), (3, (1, 3)), (1, (2, 2)), (2, (2, 3))]
    raise ValueError(w)


def b_product(word: list[int], params: list[PadicParam], n: int, p: int) -> Matrix:
    """Exact product b_{beta_1}(a_1) ... b_{beta_l}(a_l)."""
    if len(word) != len(params):
        raise LengthMismatch(f"{len(word)} letters vs {len(params)} parameters")
    g = identity(n + 1)
    for beta, a in zip(word, params):
        g = mat_mul(g, b_beta(beta, a, n, p))
    return g


def b_word_product(w: WeylElement, params_by_label, n: int, p: int) -> Matrix:
    """b_product along the fixed reduced word of w, parameters keyed by (i, j)."""
    word = reduced_word(w, n)
    letters = [beta for beta, _ in word]
    params = [params_by_label[label] for _, label in word]
    return b_product(letters, params, n, p)


def coset_representative_params(
    w: WeylElement, m: ExponentMatrix, point: dict[tuple[int, int], int]
) -> list[PadicParam]:
    """The parameter vector (c_ij p^-m_ij) of a coset point, in word order."""
    return [PadicParam(point[label], m.m(*label)) for _, label in reduced_word(w, m.n)]


def bruhat_decompose(g: Matrix) -> BruhatTriple:
    """Factor g = L N R exactly, L and R upper unitriangular, N monomial.

    Columns are processed left to right; the pivot of a column is its lowest
    not-yet-pivoted nonzero row, and entries above the pivot in unpivoted
    rows are cleared by adding a multiple of the pivot row (an upper
    unitriangular operation).  What remains is N R read off row by row;
    finally the R entries that conjugate through N to upper-triangular
    positions are pushed into L, which pins down the unique representative
    with R in the opposite-cell unipotent subgroup.
    """
    d = len(g)
    a = [row[:] for row in g]
    lmat = identity(d)
    pivot_col: list[int | None] = [None] * d  # row -> column of its leading entry
    for j in range(d):
        i_star = None
        for i in range(d - 1, -1, -1):
            if pivot_col[i] is None and a[i][j] != 0:
                i_star = i
                break
        if i_star is None:
            continue
        pivot_col[i_star] = j
        for i in range(i_star):
            if pivot_col[i] is None and a[i][j] != 0:
                coef = a[i][j] / a[i_star][j]
                for k in range(d):
                    a[i][k] -= coef * a[i_star][k]
                # g = L * a stays true: L picks up the inverse row operation
                for r in range(d):
                    lmat[r][i_star] += coef * lmat[r][i]
    if any(c is None for c in pivot_col):
        raise SingularMatrix("matrix has no Bruhat decomposition")
    nmat = [[Fraction(0)] * d for _ in range(d)]
    rmat = identity(d)
    for i in range(d):
        j = pivot_col[i]
        nmat[i][j] = a[i][j]
        for k in range(j + 1, d):
            rmat[j][k] = a[i][k] / a[i][j]
    # Normalize: clear R entries (j, k) with pivot-row(j) < pivot-row(k); each
    # factor I + v e_jk conjugates through N to an upper unitriangular matrix
    # absorbed into L.  Process by increasing k - j so cleared slots stay 0.
    row_of = {pivot_col[i]: i for i in range(d)}
    for gap in range(1, d):
        for j in range(d - gap):
            k = j + gap
            v = rmat[j][k]
            if v != 0 and row_of[j] < row_of[k]:
                # R = (I + v e_jk) R'; update R' and fold N (I + v e_jk) N^-1
                # = I + v n_j / n_k * e_{row_of[j], row_of[k]} into L.
                for t in range(k, d):
                    rmat[j][t] -= v * rmat[k][t]
                coef = v * nmat[row_of[j]][j] / nmat[row_of[k]][k]
                for r in range(d):
                    lmat[r][row_of[k]] += coef * lmat[r][row_of[j]]
    return BruhatTriple(L=lmat, N=nmat, R=rmat)


# -- closed-form triples -------------------------------------------------------


class _Formal:
    """Value algebra with the formal symbol 1/c := 0 when m = 0.

    Wraps Fraction-or-dead: multiplying anything by a dead factor gives the
    exact 0 summand.
    """

    __slots__ = ("value", "dead")

    def __init__(self, value=Fraction(1), dead=False):
        self.value = value
        self.dead = dead

    def times(self, x) -> "_Formal":
        if self.dead:
            return self
        return _Formal(self.value * x, False)

    def over(self, x) -> "_Formal":
        if self.dead:
            return self
        return _Formal(self.value / x, False)


def _lookup(m: ExponentMatrix, cvals, i: int, j: int) -> tuple[int, int]:
    """(c_ij, m_ij) with the off-triangle convention c = 1, m = 0."""
    n = m.n
    if 1 <= i <= j <= n:
        return cvals[(i, j)], m.m(i, j)
    return 1, 0


def _inv_factor(m: ExponentMatrix, cvals, i: int, j: int) -> tuple[Fraction, bool]:
    """1/c_ij, or the formal zero (dead) when m_ij = 0 on the triangle."""
    n = m.n
    if 1 <= i <= j <= n:
        if m.m(i, j) == 0:
            return Fraction(0), True
        return Fraction(1, cvals[(i, j)]), False
    return Fraction(1), False


def closed_form_triple_long(
    m: ExponentMatrix, cvals: dict[tuple[int, int], int], p: int
) -> BruhatTriple:
    """The printed L, N, R entry formulas for the full order-reversing element."""
    n = m.n
    d = n + 1

    def mm(i, j):
        return _lookup(m, cvals, i, j)[1]

    def cc(i, j):
        return _lookup(m, cvals, i, j)[0]

    nmat = [[Fraction(0)] * d for _ in range(d)]
    for i in range(1, d + 1):
        num = sum(mm(k, i - 1) for k in range(1, i))
        den = sum(mm(i, k) for k in range(1, n + 1))
        nmat[i - 1][d - i] = Fraction((-1) ** (n + 1 - i)) * Fraction(p) ** (num - den)

    lmat = identity(d)
    for i in range(1, d):
        for j in range(i + 1, d + 1):
            total = Fraction(0)
            for delta in itertools.combinations(range(1, j), j - i):
                term = _Formal()
                for k in range(1, j - i + 1):
                    term = term.times(cc(delta[k - 1], i - 2 + k))
                    prev = delta[k - 2] if k >= 2 else 0
                    for t in range(prev + 1, delta[k - 1]):
                        term = term.times(p ** mm(t, i - 2 + k))
                for k in range(1, j - i + 1):
                    inv, dead = _inv_factor(m, cvals, delta[k - 1], i - 1 + k)
                    term = _Formal(term.value, term.dead or dead).times(inv)
                for k in range(1, delta[-1] + 1):
                    term = term.over(p ** mm(k, j - 1))
                if not term.dead:
                    total += term.value
            lmat[i - 1][j - 1] = total

    rmat = identity(d)
    for i in range(1, d):
        for j in range(i + 1, d + 1):
            total = Fraction(0)
            lo = n + 1 - i
            for par in itertools.combinations_with_replacement(range(lo, n + 1), j - i):
                par_ext = par + (n,)
                term = _Formal()
                for k in range(1, j - i + 1):
                    term = term.times(cc(n + 2 - i - k, par[k - 1]))
                for k in range(par[0] + 1, n + 1):
                    term = term.times(p ** mm(n + 2 - i, k))
                for k in range(1, j - i + 1):
                    inv, dead = _inv_factor(m, cvals, n + 3 - i - k, par[k - 1])
                    term = _Formal(term.value, term.dead or dead).times(inv)
                for k in range(1, j - i + 1):
                    for t in range(par_ext[k - 1], par_ext[k] + 1):
                        term = term.over(p ** mm(n + 2 - i - k, t))
                if not term.dead:
                    total += term.value
            rmat[i - 1][j - 1] = total

    return BruhatTriple(L=lmat, N=nmat, R=rmat)


def closed_form_triple_star(
    m: ExponentMatrix, cvals: dict[tuple[int, int], int], p: int
) -> BruhatTriple:
    """The printed L, N, R entry formulas for the order-2 element (n >= 2)."""
    n = m.n
    d = n + 1

    def mm(i, j):
        return _lookup(m, cvals, i, j)[1]

    def cc(i, j):
        return _lookup(m, cvals, i, j)[0]

    def inv(i, j):
        return _inv_factor(m, cvals, i, j)

    P = Fraction(p)

    nmat = [[Fraction(0)] * d for _ in range(d)]
    nmat[0][d - 1] = Fraction((-1) ** n) * P ** (-sum(mm(1, j) for j in range(1, n + 1)))
    for i in range(2, n + 1):
        nmat[i - 1][i - 1] = -(P ** (mm(1, i - 1) - mm(i, n)))
    nmat[d - 1][0] = P ** sum(mm(j, n) for j in range(1, n + 1))

    lmat = identity(d)
    # Above the diagonal L factors as L_ij = S_i * T_j (rank one), where
    #   T_j = c_jn * p^{-m_1(j-1)} * prod_{k=2}^{j-1} p^{-m_kn}        (2 <= j)
    #   S_1 = 1 / (c_11 c_2n)
    #   S_i = (c_1(i-1) c_in p^{m_in} + c_1i c_(i+1)n p^{m_1(i-1)})
    #         * prod_{k=2}^{i-1} p^{m_kn} / (c_1i c_in c_(i+1)n)       (2 <= i <= n)
    # with c_(n+1)n = 1; each S_i dies with its formal inverses.
    tvals = {}
    for j in range(2, d + 1):
        tvals[j] = cc(j, n) * P ** (-mm(1, j - 1) - sum(mm(k, n) for k in range(2, j)))
    svals = {}
    f0, d0 = inv(1, 1)
    f1, d1 = inv(2, n)
    svals[1] = None if (d0 or d1) else f0 * f1
    for i in range(2, n + 1):
        fa, da = inv(1, i)
        fb, db = inv(i, n)
        fc, dc = inv(i + 1, n)
        if da or db or dc:
            svals[i] = None
            continue
        num = cc(1, i - 1) * cc(i, n) * P ** mm(i, n) + cc(1, i) * cc(i + 1, n) * P ** mm(
            1, i - 1
        )
        svals[i] = num * fa * fb * fc * P ** sum(mm(k, n) for k in range(2, i))
    for i in range(1, d):
        if svals[i] is None:
            continue
        for j in range(i + 1, d + 1):
            lmat[i - 1][j - 1] = svals[i] * tvals[j]

    rmat = identity(d)
    for j in range(2, n + 1):
        rmat[0][j - 1] = cc(j, n) * P ** (-sum(mm(k, n) for k in range(2, j + 1)))
    rmat[0][d - 1] = cc(1, n) * P ** (-sum(mm(k, n) for k in range(1, n + 1)))
    for i in range(2, n + 1):
        sgn = Fraction((-1) ** (n - i))
        total = Fraction(0)
        f, dead = inv(i, n)
        if not dead:
            total += (
                cc(1, i) * cc(i + 1, n) * f * P ** (-sum(mm(1, k) for k in range(i, n + 1)))
            )
        total += cc(1, i - 1) * P ** (
            mm(i, n) - sum(mm(1, k) for k in range(i - 1, n + 1))
        )
        rmat[i - 1][d - 1] = sgn * total

    return BruhatTriple(L=lmat, N=nmat, R=rmat)


def closed_form_triple(
    w: WeylElement, m: ExponentMatrix, cvals: dict[tuple[int, int], int], p: int
) -> BruhatTriple:
    if w is WeylElement.LONG:
        return closed_form_triple_long(m, cvals, p)
    if w is WeylElement.STAR:
        return closed_form_triple_star(m, cvals, p)
    raise ValueError(f"no closed-form triple for {w}")


def triple_product(t: BruhatTriple) -> Matrix:
    return mat_mul(t.L, mat_mul(t.N, t.R))


def random_coset_point(
    w: WeylElement, m: ExponentMatrix, p: int, rng
) -> dict[tuple[int, int], int]:
    """One uniformly random point of C_w(m)."""
    point = {}
    for idx in support(w, m.n):
        mod = p ** modulus_exponent(w, m, idx)
        while True:
            c = rng.randrange(mod) if mod > 1 else 0
            if m.m(*idx) == 0 or c % p != 0:
                point[idx] = c
                break
    return point
