from fractions import Fraction
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from sullivan_hfp.cdga import (CDGAError, DualCoalgebra, FiniteAlgebra, FreeCDGA, Morphism,
                               betti_numbers, cohomology, free_algebra, skeleton_truncate,
                               truncate_free)
from sullivan_hfp.polynomial import Polynomial, make_generators


def s2():
    return free_algebra([("x", 2), ("y", 3)], {"y": lambda g: g["x"] ** 2})


def test_apply_d_leibniz_examples():
    S = s2()
    x, y = (Polynomial.gen(g) for g in S.generators)
    assert S.apply_d(x * y) == x ** 3
    assert S.apply_d(y * y) == Polynomial.zero()
    assert S.apply_d(x) == Polynomial.zero()


def test_rejects_bad_differentials():
    with pytest.raises(CDGAError):
        free_algebra([("x", 2), ("y", 3)], {"y": lambda g: g["x"]})
    with pytest.raises(CDGAError):
        # d(z) = y is fine degree-wise but d^2 z = x^2 != 0
        free_algebra([("x", 2), ("y", 3), ("z", 2)], {"y": lambda g: g["x"] ** 2, "z": lambda g: g["y"]})


def test_truncations():
    a = make_generators([("a", 2)])
    A = FiniteAlgebra.truncated_polynomial(a, 4)
    assert A.labels == ["1", "a", "a^2"]
    assert A.mul_basis(1, 2) == {}
    assert FiniteAlgebra.truncated_polynomial(a, 0).labels == ["1"]
    two = make_generators([("a1", 2), ("a2", 2)])
    B = FiniteAlgebra.truncated_polynomial(two, 4)
    assert sorted(B.labels) == sorted(["1", "a1", "a2", "a1^2", "a1*a2", "a2^2"])


def test_truncate_free_rejects_odd():
    with pytest.raises(CDGAError):
        truncate_free(free_algebra([("u", 3)]), 4)


def test_skeleton_examples():
    a = make_generators([("a", 2)])
    A = FiniteAlgebra.truncated_polynomial(a, 4)
    assert skeleton_truncate(A, 2).labels == ["1", "a"]
    assert skeleton_truncate(A, 10).labels == A.labels


def test_cohomology_examples():
    S3 = free_algebra([("x", 3)])
    assert [(h.degree, h.dim) for h in cohomology(S3, 6) if h.dim] == [(0, 1), (3, 1)]
    pair = free_algebra([("x", 3), ("y", 2)], {"y": lambda g: g["x"]})
    assert betti_numbers(pair, 8) == [1] + [0] * 8
    cp2 = free_algebra([("x", 2), ("y", 5)], {"y": lambda g: g["x"] ** 3})
    assert betti_numbers(cp2, 8) == [1, 0, 1, 0, 1, 0, 0, 0, 0]


def test_morphism_commutes():
    S = s2()
    T = free_algebra([("x", 2), ("y", 3)], {"y": lambda g: g["x"] ** 2})
    m = Morphism(S, T, {"x": Polynomial.gen(T.generators[0]).scale(2),
                        "y": Polynomial.gen(T.generators[1]).scale(4)})
    assert m.apply(Polynomial.gen(S.generators[0]) ** 2) == Polynomial.gen(T.generators[0]) ** 2 * 4
    with pytest.raises(CDGAError):
        Morphism(S, T, {"x": Polynomial.gen(T.generators[0]).scale(2),
                        "y": Polynomial.gen(T.generators[1])})


# -- finite algebras: random monomial quotients --------------------------------------------

SPECS = [
    [("a", 2)], [("a", 2), ("b", 2)], [("a", 2), ("u", 3)], [("u", 3), ("v", 3)],
    [("a", 2), ("b", 4), ("u", 1)], [("s", 2), ("t", 3), ("w", 5)],
]


def random_quotient(rng):
    """Monomials of bounded degree in a random graded-commutative algebra."""
    spec = rng.choice(SPECS)
    gens = make_generators(spec)
    N = rng.randint(0, 8)
    from sullivan_hfp.cdga import monomials_of_degree
    basis = [Polynomial.monomial(m) for d in range(N + 1) for m in monomials_of_degree(gens, d)]
    return FiniteAlgebra.monomial_quotient(basis)


def finite_cohomology(A):
    """Betti numbers of a finite CDGA via sympy ranks."""
    top = max(A.degrees)
    dims = {}
    ranks = {}
    for k in range(-1, top + 2):
        src, tgt = A.basis_in_degree(k), A.basis_in_degree(k + 1)
        M = sympy.zeros(len(tgt), len(src))
        for j, i in enumerate(src):
            for t, c in A.d_basis(i).items():
                M[tgt.index(t), j] = sympy.Rational(c.numerator, c.denominator)
        ranks[k] = M.rank() if src and tgt else 0
    for k in range(0, top + 1):
        dims[k] = len(A.basis_in_degree(k)) - ranks[k] - ranks[k - 1]
    return dims


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_finite_algebra_axioms_and_coalgebra(seed):
    A = random_quotient(random.Random(seed))
    A.check()
    DualCoalgebra(A).check()


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_mul_associative_and_commutative(seed):
    rng = random.Random(seed)
    A = random_quotient(rng)
    picks = [rng.randrange(A.dim) for _ in range(3)]
    x, y, z = ({i: Fraction(rng.randint(1, 5))} for i in picks)
    assert A.mul(A.mul(x, y), z) == A.mul(x, A.mul(y, z))
    i, j = picks[:2]
    sign = -1 if A.degrees[i] * A.degrees[j] % 2 else 1
    assert A.mul(x, y) == {k: sign * c for k, c in A.mul(y, x).items()}


def _base_with_differential():
    u, w = make_generators([("u", 2), ("w", 3)])
    U, W = Polynomial.gen(u), Polynomial.gen(w)
    basis = [Polynomial.one(), U, U ** 2, W, U * W, U ** 3, U ** 2 * W]
    return FiniteAlgebra.monomial_quotient(basis, {"w": U ** 2})


def test_skeleton_keeps_low_cohomology():
    A = _base_with_differential()
    full = finite_cohomology(A)
    for n in range(0, max(A.degrees) + 1):
        S = skeleton_truncate(A, n)
        S.check()
        sk = finite_cohomology(S)
        for k in range(0, n + 1):
            assert sk.get(k, 0) == full.get(k, 0), (n, k)
        assert all(v == 0 for k, v in sk.items() if k > n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_skeleton_cohomology_random(seed):
    A = random_quotient(random.Random(seed))
    n = random.Random(seed + 1).randint(0, max(A.degrees))
    full, sk = finite_cohomology(A), finite_cohomology(skeleton_truncate(A, n))
    assert all(sk.get(k, 0) == full.get(k, 0) for k in range(n + 1))
