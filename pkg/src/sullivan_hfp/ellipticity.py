"""Ellipticity certificates: pure parts, nilpotence witnesses, and lifting them to components."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from .cdga import CDGAError, FreeCDGA, monomials_of_degree
from .linalg import solve_membership
from .polynomial import Generator, Polynomial
from .section import (
    ComponentModel,
    NonTriangular,
    Retraction,
    SectionModel,
    component_model,
    shift_retraction,
)


class AlphaOutOfRange(ValueError):
    """The dual element needed for a lift lies above the truncation degree."""


class ProvenanceMissing(ValueError):
    pass


def pure_part(A: FreeCDGA) -> FreeCDGA:
    """Keep, for odd generators, only the terms of ``dv`` in the even subalgebra."""
    diff = {}
    for g in A.generators:
        if g.odd:
            diff[g.name] = A.d[g.name].filter(lambda m: all(not h.odd for h, _ in m))
        else:
            diff[g.name] = Polynomial.zero()
    return FreeCDGA(A.generators, diff)


def triangular_order(A: FreeCDGA) -> List[str]:
    """Generators ordered so that ``dv`` only involves earlier ones (ties: degree, then name)."""
    deps = {g.name: {h.name for h in A.d[g.name].generators()} for g in A.generators}
    by = {g.name: g for g in A.generators}
    done: List[str] = []
    placed = set()
    while len(done) < len(deps):
        ready = [n for n in deps if n not in placed and deps[n] <= placed]
        if not ready:
            raise NonTriangular("the differential has no triangular ordering")
        nxt = min(ready, key=lambda n: (by[n].degree, by[n]))
        done.append(nxt)
        placed.add(nxt)
    return done


def check_triangular(A: FreeCDGA, order: Sequence[str]):
    if sorted(order) != sorted(A.names):
        raise NonTriangular("order must list every generator exactly once")
    seen = set()
    for n in order:
        if not {h.name for h in A.d[n].generators()} <= seen:
            raise NonTriangular(f"d({n}) involves generators that come later in the order")
        seen.add(n)


@dataclass
class EllipticityWitness:
    generator: str
    exponent: int
    psi: Polynomial
    theta: Polynomial

    def as_tuple(self):
        return (self.generator, self.exponent, self.psi, self.theta)


@dataclass
class EllipticityReport:
    verdict: str                  # "Elliptic" or "Inconclusive"
    witnesses: List[EllipticityWitness]
    failed: List[str]
    order: List[str]
    differential: str             # "d" or "d_sigma"

    @property
    def elliptic(self) -> bool:
        return self.verdict == "Elliptic"


def in_ideal_of(p: Polynomial, names) -> bool:
    names = set(names)
    return all(any(g.name in names for g, _ in m) for m in p.terms)


def find_witnesses(A: FreeCDGA, order: Optional[Sequence[str]] = None, n_cap: int = 16,
                   pure: bool = False, degree_bound: int = 64) -> EllipticityReport:
    """Search for ``dΨ = x^N + Θ`` with ``Θ`` in the ideal of earlier generators.

    With ``pure`` the search runs on the pure part and only considers ``Ψ``
    linear in odd generators, which is enough there.
    """
    B = pure_part(A) if pure else A
    if order is None:
        order = triangular_order(B)
    else:
        order = list(order)
        check_triangular(B, order)
    by = {g.name: g for g in B.generators}
    witnesses, failed = [], []
    for pos, name in enumerate(order):
        x = by[name]
        if x.odd:
            continue
        earlier = set(order[:pos])
        later = [by[n] for n in order[pos:]]
        kill = {n: Polynomial.zero() for n in earlier}
        w = _search(B, x, later, kill, n_cap, pure, degree_bound)
        if w is None:
            failed.append(name)
        else:
            assert in_ideal_of(w.theta, earlier)
            witnesses.append(w)
    verdict = "Inconclusive" if failed else "Elliptic"
    return EllipticityReport(verdict, witnesses, failed, list(order), "d_sigma" if pure else "d")


def _search(B: FreeCDGA, x: Generator, later: List[Generator], kill: Dict[str, Polynomial],
            n_cap: int, pure: bool, degree_bound: int) -> Optional[EllipticityWitness]:
    if x.degree <= 0:
        raise CDGAError("witness search needs generators of positive degree")
    X = Polynomial.gen(x)
    for N in range(1, n_cap + 1):
        deg = N * x.degree - 1
        if deg > degree_bound:
            break
        monos = monomials_of_degree(later, deg)
        if pure:
            monos = [m for m in monos if sum(1 for g, _ in m if g.odd) == 1]
        images = [B.apply_d(Polynomial.monomial(m)).substitute(kill) for m in monos]
        target = X ** N
        coeffs = solve_membership(target, images)
        if coeffs is None:
            continue
        psi = Polynomial({m: c for m, c in zip(monos, coeffs) if c})
        theta = B.apply_d(psi) - target
        return EllipticityWitness(x.name, N, psi, theta)
    return None


# ---------------------------------------------------------------------------
# precedence among generators of a component model
# ---------------------------------------------------------------------------

@dataclass
class PrecedenceOrder:
    keys: Dict[str, tuple]

    def precedes(self, a: str, b: str) -> bool:
        return self.keys[a] < self.keys[b]

    def sorted(self) -> List[str]:
        return sorted(self.keys, key=self.keys.__getitem__)

    def before(self, name: str) -> List[str]:
        k = self.keys[name]
        return [n for n, v in self.keys.items() if v < k]


def precedence_key(fiber_index: int, x_degree: int, beta_degree: int,
                   beta_exponents: Sequence[int], odd: bool, name: str) -> tuple:
    """Sort key realising the order: ``x⊗1♯`` first (by fiber position), then the
    other even generators by the signed ratio ``|x| / |β♯|``, fiber position and
    lexicographic exponents; odd generators last by degree and name."""
    if odd:
        return (2, x_degree - beta_degree, name)
    if beta_degree == 0:
        return (0, fiber_index)
    ratio = Fraction(x_degree, -beta_degree)
    return (1, ratio, fiber_index, tuple(beta_exponents))


def precedence_order(C: ComponentModel, fiber_order: Optional[Sequence[str]] = None) -> PrecedenceOrder:
    S = C.section
    if S is None or not getattr(S, "provenance", None):
        raise ProvenanceMissing("component model has no section-model provenance")
    F = S.source
    A = F.base
    if fiber_order is None:
        fiber_order = triangular_order(pure_part(F.fiber_model()))
    pos = {n: i for i, n in enumerate(fiber_order)}
    keys = {}
    for g in C.algebra.generators:
        v, k = S.provenance[g.name]
        exps = A.exponents[k] if A.exponents is not None else (k,)
        keys[g.name] = precedence_key(pos[v], F.generator(v).degree, A.degrees[k], exps,
                                      g.odd, g.name)
    return PrecedenceOrder(keys)


# ---------------------------------------------------------------------------
# lifting witnesses
# ---------------------------------------------------------------------------

@dataclass
class LiftedWitness:
    target: str
    eta: Polynomial
    exponent: int
    remainder: Polynomial
    preceding: List[str]
    certified: bool


def lift_witness(C: ComponentModel, target: str, witness: EllipticityWitness,
                 order: Optional[PrecedenceOrder] = None,
                 pure: Optional[FreeCDGA] = None) -> LiftedWitness:
    S = C.section
    F = S.source
    A = F.base
    if A.has_differential():
        raise CDGAError("witness lifting assumes a base with zero differential")
    if A.exponents is None:
        raise ProvenanceMissing("witness lifting needs a polynomial base")
    v, k = S.provenance[target]
    if v != witness.generator:
        raise ValueError(f"witness is for {witness.generator}, target comes from {v}")
    N = witness.exponent
    alpha = A.index_of_exponents(tuple(e * N for e in A.exponents[k]))
    if alpha is None:
        raise AlphaOutOfRange(f"{target}: exponent {N} needs a dual element above the truncation")
    eta = Polynomial.zero()
    for m, c in witness.psi.terms.items():
        eta = eta + S.rho_inverse(A.unit, m, alpha).scale(c)
    eta = C.project(eta)
    if order is None:
        order = precedence_order(C)
    if pure is None:
        pure = pure_part(C.algebra)
    tgt = Polynomial.gen(next(g for g in C.algebra.generators if g.name == target))
    nu = pure.apply_d(eta) - tgt ** N
    before = order.before(target)
    return LiftedWitness(target, eta, N, nu, before, in_ideal_of(nu, before))


@dataclass
class ComponentEllipticity:
    verdict: str
    lifts: List[LiftedWitness]
    base: EllipticityReport
    shifted: bool = False
    component: Optional[ComponentModel] = None

    @property
    def elliptic(self) -> bool:
        return self.verdict == "Elliptic"


def certify_component_elliptic(C: ComponentModel, n_cap: int = 16) -> ComponentEllipticity:
    """Lift fiber witnesses to every even generator of the component."""
    S = C.section
    shifted = False
    if not C.retraction.is_zero():
        F2 = shift_retraction(S.source, C.retraction)
        S = SectionModel(F2, pointed=S.pointed)
        C = component_model(S, Retraction({}))
        shifted = True
    fiber = S.source.fiber_model()
    base = find_witnesses(fiber, n_cap=n_cap, pure=True)
    if not base.elliptic:
        return ComponentEllipticity("Inconclusive", [], base, shifted, C)
    by_gen = {w.generator: w for w in base.witnesses}
    order = precedence_order(C, base.order)
    pure = pure_part(C.algebra)
    lifts = []
    for g in sorted(C.algebra.even(), key=lambda g: order.keys[g.name]):
        v, _ = S.provenance[g.name]
        lifts.append(lift_witness(C, g.name, by_gen[v], order, pure))
    verdict = "Elliptic" if all(l.certified for l in lifts) else "Inconclusive"
    return ComponentEllipticity(verdict, lifts, base, shifted, C)


__all__ = [
    "AlphaOutOfRange", "ProvenanceMissing", "pure_part", "triangular_order", "find_witnesses",
    "EllipticityWitness", "EllipticityReport", "PrecedenceOrder", "precedence_key",
    "precedence_order", "LiftedWitness", "lift_witness", "certify_component_elliptic",
    "ComponentEllipticity", "in_ideal_of",
]
