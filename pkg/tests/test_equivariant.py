from fractions import Fraction

import pytest

from sullivan_hfp.cdga import CDGAError, FreeCDGA, free_algebra
from sullivan_hfp.equivariant import (EquivariantPairModel, KModel, Preconditions, build_borel,
                                      indecomposable_homology, indecomposables, is_T_minimal,
                                      k_model, lemma_aux_basis, localize_check,
                                      localized_cohomology_rank, never_equivalence_check,
                                      pi_k_injective_check)
from sullivan_hfp.linalg import PolyMatrix
from sullivan_hfp.polynomial import Polynomial


def test_builders():
    B = build_borel("odd_sphere", n=3, N=4)
    assert B.fibration.base.labels == ["1", "a", "a^2"]
    assert not any(B.fibration.D.values())
    E = build_borel("even_sphere", n=2, lam=1, N=8)
    assert str(E.poly_D["y"]) == "a*x + x^2"
    C = build_borel("cp_n", n=2, lam=[0, 0])
    assert str(C.poly_D["y"]) == "x^3"
    assert build_borel("odd_sphere", n=5).N == 6


def test_builder_errors():
    with pytest.raises(ValueError):
        build_borel("odd_sphere", n=4)
    with pytest.raises(ValueError):
        build_borel("cp_n", n=2, lam=[1])
    with pytest.raises(ValueError):
        build_borel("klein_bottle", n=2)


def _sphere_pair(n, j, m0=None):
    B = build_borel("odd_sphere", n=n)
    exponent = (n - j) // 2 if m0 is None else m0
    return EquivariantPairModel(B, [("z", j)], psi={"x": lambda g: g["a"] ** exponent * g["z"]})


@pytest.mark.parametrize("n,j", [(3, 1), (3, 3), (5, 1), (5, 3)])
def test_k_model_odd_spheres(n, j):
    K = k_model(_sphere_pair(n, j))
    e = (n - j) // 2
    target = "x__1" if e == 0 else ("x__a" if e == 1 else f"x__ap{e}")
    assert K.maps_onto() == {"z": [target]}
    assert K.linear_image(target) == {"z": 1}
    assert pi_k_injective_check(K).verdict == "Injective"


def test_direct_psi_kills_dual_of_a():
    K = k_model(_sphere_pair(3, 3))
    assert K.assignment["x__1"] == Polynomial.gen(K.target.generators[0])
    assert not K.assignment["x__a"]


def test_zeroed_assignment_not_injective():
    K = k_model(_sphere_pair(3, 1))
    zero = KModel(K.source, K.target, {n: Polynomial.zero() for n in K.assignment})
    assert pi_k_injective_check(zero).verdict == "NotInjective"


def test_trivial_group_injective():
    B = build_borel("odd_sphere", n=3, N=0)
    P = EquivariantPairModel(B, [("z", 3)], psi={"x": lambda g: g["z"]})
    assert pi_k_injective_check(k_model(P)).verdict == "Injective"


def test_bad_psi_rejected():
    B = build_borel("even_sphere", n=2, lam=0)
    with pytest.raises(CDGAError):
        # x -> u forces D y = x^2 -> u^2, which must be d(psi(y)) = 0
        EquivariantPairModel(B, [("u", 2)], psi={"x": lambda g: g["u"]})


@pytest.mark.parametrize("n", [3, 5])
def test_never_equivalence(n):
    direct = never_equivalence_check(_sphere_pair(n, n, m0=0))
    assert direct.verdict == "NotEquivalence"
    assert direct.detail["generator"] == "x__a" and direct.detail["degree"] == n - 2
    shifted = never_equivalence_check(_sphere_pair(n, n - 2, m0=1))
    assert shifted.verdict == "NotEquivalence"
    assert shifted.detail["generator"] == "x__1" and shifted.detail["degree"] == n


def test_never_equivalence_preconditions():
    with pytest.raises(Preconditions):
        never_equivalence_check(_sphere_pair(3, 3, m0=0), minimal=False)
    B = build_borel("even_sphere", n=2, lam=1)
    P = EquivariantPairModel(B, [], psi={})
    with pytest.raises(Preconditions):
        never_equivalence_check(P)


def test_aux_basis():
    aux = lemma_aux_basis(_sphere_pair(5, 1))
    assert [(str(t.w), t.z, t.exponent) for t in aux.triples] == [("x", "z", 2)]
    assert not aux.discrepancies
    B = build_borel("odd_sphere", n=7)
    P = EquivariantPairModel(B, [("z", 3), ("p", 1), ("q", 4)],
                             psi={"x": lambda g: g["a"] ** 2 * g["z"] + g["a"] * g["p"] * g["q"]})
    aux = lemma_aux_basis(P)
    assert [(str(t.w), t.z, t.exponent) for t in aux.triples] == [("x", "z", 2)]


def test_indecomposables():
    rot = indecomposables(build_borel("even_sphere", n=2, lam=1))
    assert str(rot.column("y")["x"]) == "a"
    assert not rot.column("x")
    assert not is_T_minimal(rot)
    assert indecomposable_homology(rot) == (0, 0)
    odd = indecomposables(build_borel("odd_sphere", n=5))
    assert is_T_minimal(odd)
    cp = indecomposables(build_borel("cp_n", n=2, lam=[1, 0]))
    assert is_T_minimal(cp)
    assert is_T_minimal(type(cp)(["x"], [0], PolyMatrix([[Polynomial.zero()]])))


def test_localization():
    triv = build_borel("even_sphere", n=2, lam=0)
    s2 = free_algebra([("u", 2), ("v", 3)], {"v": lambda g: g["u"] ** 2})
    rep = localize_check(triv, [s2])
    assert rep.indecomposable_homology == (1, 1) == rep.fixed_generators
    assert rep.cohomology_total == 2 and rep.verdict == "QuasiIsomorphism"
    rot = build_borel("even_sphere", n=2, lam=1)
    rep = localize_check(rot, [FreeCDGA([]), FreeCDGA([])])
    assert rep.cohomology_rank == (2, 0) == rep.fixed_cohomology
    assert rep.verdict == "QuasiIsomorphism"
    # a single point is the wrong fixed set for the rotation
    assert localize_check(rot, [FreeCDGA([])]).verdict == "Mismatch"


def test_localized_rank_odd_sphere():
    assert localized_cohomology_rank(build_borel("odd_sphere", n=3)) == (1, 1)
