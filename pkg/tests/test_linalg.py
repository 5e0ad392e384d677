from fractions import Fraction
import random

import sympy
from hypothesis import given, settings, strategies as st

from sullivan_hfp.linalg import (PolyMatrix, RationalMatrix, bareiss_rank, poly_matrix_rank,
                                 rational_roots, solve_membership)
from sullivan_hfp.polynomial import Polynomial, make_generators

a, b, x, y = make_generators([("a", 2), ("b", 2), ("x", 2), ("y", 3)])
A, B, X, Y = (Polynomial.gen(g) for g in (a, b, x, y))


def test_membership_examples():
    assert solve_membership(X ** 2, [X ** 2, A * X]) == [1, 0]
    assert solve_membership(X ** 2, [A * X]) is None
    assert solve_membership(X.scale(3) * X + (A * X).scale(2), [X ** 2, A * X]) == [3, 2]


def test_poly_rank_examples():
    assert poly_matrix_rank(PolyMatrix([[A]])) == 1
    assert poly_matrix_rank(PolyMatrix([[A, A ** 2], [Polynomial.one(), A]])) == 1
    assert poly_matrix_rank(PolyMatrix([[A, B], [B, A]])) == 2


def test_rational_roots_examples():
    assert sorted(rational_roots([1, 1, 0])) == [-1, 0]
    assert rational_roots([1, 0, 0, 0]) == [0, 0, 0]
    assert rational_roots([1, 0, -2]) == []


def test_rref_and_nullspace():
    M = RationalMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert M.rank() == 2
    for v in M.nullspace():
        assert not M.apply(v)


ints = st.integers(min_value=-4, max_value=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(ints, min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_against_sympy(rows):
    assert RationalMatrix.from_dense(rows).rank() == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(st.lists(ints, min_size=2, max_size=5).filter(lambda c: c[0] != 0))
def test_roots_against_sympy(coeffs):
    t = sympy.Symbol("t")
    poly = sympy.Poly(coeffs, t)
    expected = []
    for r, mult in sympy.roots(poly, filter="Q").items():
        expected += [Fraction(int(sympy.numer(r)), int(sympy.denom(r)))] * mult
    assert sorted(rational_roots(coeffs)) == sorted(expected)


def _random_poly(rng, deg):
    p = Polynomial.zero()
    for i in range(deg + 1):
        c = rng.randint(-2, 2)
        if c:
            p = p + (A ** i * B ** (deg - i)).scale(c)
    return p


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_poly_rank_against_evaluations(seed):
    """Rank over Q(a, b) equals the max rank over a handful of rational points."""
    rng = random.Random(seed)
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    # build a rank-deficient matrix sometimes: last row = a * first row
    entries = [[_random_poly(rng, rng.randint(0, 2)) for _ in range(m)] for _ in range(n)]
    if n > 1 and rng.random() < 0.5:
        entries[-1] = [e * A for e in entries[0]]
    M = PolyMatrix(entries, variables=[a, b])
    sym = sympy.Matrix([[sympy.sympify(str(e).replace("^", "**")) for e in row] for row in entries])
    assert poly_matrix_rank(M) == sym.rank()
    evals = max(M.evaluate({"a": Fraction(rng.randint(-9, 9), 7), "b": Fraction(rng.randint(1, 9), 5)}).rank()
                for _ in range(5))
    assert evals <= poly_matrix_rank(M)


def test_bareiss_pivots_nonzero():
    r, piv = bareiss_rank(PolyMatrix([[A, B], [A * B, B * B]]))
    assert r == 1 and all(piv)
