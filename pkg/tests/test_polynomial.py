from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from sullivan_hfp.polynomial import (AlgebraMismatch, Generator, Polynomial, exact_divide,
                                     make_generators)

a, x, y, u = make_generators([("a", 2), ("x", 3), ("y", 5), ("u", 2)])
A, X, Y, U = (Polynomial.gen(g) for g in (a, x, y, u))


def test_odd_square_vanishes():
    assert X * X == Polynomial.zero()


def test_koszul_swap():
    assert Y * X == -(X * Y)


def test_even_variables_commute():
    assert (U * U + A * U) * U == U ** 3 + A * U ** 2


def test_str_format():
    p = U ** 2 - A * U.scale(Fraction(3, 2)) + 1
    assert str(p) == "1 - 3/2*a*u + u^2"


def test_substitute():
    p = U ** 2 + A * X
    assert p.substitute({"u": A}) == A ** 2 + A * X


def test_exact_divide():
    assert exact_divide(A ** 3 + A ** 2 * U, A ** 2) == A + U


def test_linear_part():
    p = U.scale(2) + A * U + X
    assert p.linear_part() == {u: 2, x: 1}


# -- naive oracle: words of generators sorted by adjacent swaps --------------------

def word_product(words):
    """Multiply words of generators by concatenation, then sort with Koszul signs."""
    w = [g for word in words for g in word]
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j + 1] < w[j]:
                if w[j].odd and w[j + 1].odd:
                    sign = -sign
                w[j], w[j + 1] = w[j + 1], w[j]
    for p, q in zip(w, w[1:]):
        if p == q and p.odd:
            return Polynomial.zero()
    out = Polynomial.one()
    for g in w:
        out = out * Polynomial.gen(g)  # already sorted, no sign changes
    return out.scale(sign)


GENS = make_generators([("p", 1), ("q", 2), ("r", 3), ("s", 3), ("t", 4)])
words = st.lists(st.sampled_from(GENS), min_size=0, max_size=4)


def poly_of_word(w):
    p = Polynomial.one()
    for g in w:
        p = p * Polynomial.gen(g)
    return p


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_product_matches_word_oracle(w1, w2):
    assert poly_of_word(w1) * poly_of_word(w2) == word_product([w1, w2])


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_graded_commutativity(w1, w2):
    p, q = poly_of_word(w1), poly_of_word(w2)
    if p and q:
        sign = -1 if (p.degree() * q.degree()) % 2 else 1
        assert p * q == (q * p).scale(sign)


def test_mixing_algebras_rejected():
    other = Generator(0, "a", 4)
    with pytest.raises(AlgebraMismatch):
        A * Polynomial.gen(other)
