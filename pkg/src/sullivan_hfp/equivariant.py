"""Borel fibrations of torus actions, the map from fixed points to homotopy fixed points,
and the localization and injectivity checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cdga import CDGAError, FreeCDGA, Morphism, cohomology
from .ellipticity import find_witnesses
from .linalg import PolyMatrix, RationalMatrix, poly_matrix_rank
from .polynomial import Generator, Polynomial, make_generators
from .section import (
    RelativeSullivan,
    SectionModel,
    polynomial_to_tensor,
)


class Preconditions(ValueError):
    """The hypotheses of a check are not met by the input."""


FAMILIES = ("odd_sphere", "even_sphere", "cp_n", "custom")


@dataclass
class BorelModel:
    """A relative model over a truncated ``Q[a_1..a_m]`` plus the data used to build it."""

    family: str
    torus_rank: int
    N: int
    fibration: RelativeSullivan
    params: Dict[str, object] = field(default_factory=dict)

    @property
    def base_generators(self) -> List[Generator]:
        return self.fibration.base_generators

    @property
    def poly_D(self) -> Dict[str, Polynomial]:
        return self.fibration.poly_D

    def total_model(self) -> FreeCDGA:
        """``(R ⊗ ΛV, D)`` over the untruncated polynomial ring."""
        return total_model(self.base_generators, self.fibration.fiber, self.poly_D)


def base_names(m: int) -> List[str]:
    return ["a"] if m == 1 else [f"a{i}" for i in range(1, m + 1)]


def total_model(base: Sequence[Generator], fiber: Sequence[Generator],
                D: Mapping[str, Polynomial]) -> FreeCDGA:
    return FreeCDGA(list(base) + list(fiber), dict(D))


def build_borel(family: str, n: int = 0, torus: int = 1, N: Optional[int] = None,
                lam=None, fiber=None, D=None) -> BorelModel:
    """Relative model of the Borel fibration for one of the standard families.

    ``even_sphere`` takes ``Dy = x^2 + lam * a^(n/2) x``; ``cp_n`` takes
    ``Dy = x^(n+1) + sum_j lam_j a^j x^(n+1-j)``.  ``custom`` takes a fiber
    specification and a differential given by callables on a name dict.  The
    default truncation is one more than the top fiber degree.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if torus < 1:
        raise ValueError("torus rank must be positive")
    bvars = [(nm, 2) for nm in base_names(torus)]
    params: Dict[str, object] = {"n": n}
    if family == "odd_sphere":
        if n < 1 or n % 2 == 0:
            raise ValueError("odd_sphere needs an odd dimension")
        fspec, diff = [("x", n)], {}
    elif family == "even_sphere":
        if n < 2 or n % 2:
            raise ValueError("even_sphere needs an even dimension >= 2")
        if torus != 1:
            raise ValueError("even_sphere is built for circle actions")
        lam = Fraction(lam or 0)
        params["lambda"] = lam
        fspec = [("x", n), ("y", 2 * n - 1)]
        half = n // 2
        diff = {"y": lambda g: g["x"] ** 2 + g["a"] ** half * g["x"] * lam}
    elif family == "cp_n":
        if n < 1:
            raise ValueError("cp_n needs n >= 1")
        if torus != 1:
            raise ValueError("cp_n is built for circle actions")
        lams = [Fraction(v) for v in (lam or [0] * n)]
        if len(lams) != n:
            raise ValueError(f"cp_n with n={n} needs {n} parameters, got {len(lams)}")
        params["lambda"] = lams
        fspec = [("x", 2), ("y", 2 * n + 1)]

        def dy(g, lams=lams, n=n):
            p = g["x"] ** (n + 1)
            for j, lj in enumerate(lams, start=1):
                if lj:
                    p = p + (g["a"] ** j * g["x"] ** (n + 1 - j)) * lj
            return p
        diff = {"y": dy}
    else:
        if fiber is None:
            raise ValueError("custom family needs a fiber specification")
        fspec, diff = list(fiber), dict(D or {})
    if N is None:
        N = 1 + max(d for _, d in fspec)
    F = RelativeSullivan.from_polynomials(bvars, N, fspec, diff)
    return BorelModel(family, torus, N, F, params)


# ---------------------------------------------------------------------------
# pairs (X, X^G) and the model of k
# ---------------------------------------------------------------------------

class EquivariantPairModel:
    """``ψ: (R ⊗ ΛV, D) -> R ⊗ (ΛZ, d)`` over the identity of ``R``.

    ``psi`` maps fiber generator names to polynomials in the base and ``Z``.
    """

    def __init__(self, borel: BorelModel, fixed: Sequence[Tuple[str, int]],
                 fixed_d: Optional[Mapping[str, object]] = None,
                 psi: Optional[Mapping[str, object]] = None):
        self.borel = borel
        base = borel.base_generators
        self.fixed_generators = make_generators(fixed, start=len(base) + len(borel.fibration.fiber))
        names = {g.name: Polynomial.gen(g) for g in list(base) + self.fixed_generators}

        def ev(f):
            return f(names) if callable(f) else Polynomial.coerce(f)

        self.fixed_d = {g.name: ev((fixed_d or {}).get(g.name, Polynomial.zero()))
                        for g in self.fixed_generators}
        self.psi = {v.name: ev((psi or {}).get(v.name, Polynomial.zero()))
                    for v in borel.fibration.fiber}
        self.fixed_model = FreeCDGA(self.fixed_generators, self.fixed_d)
        self._source = borel.total_model()
        self._target = FreeCDGA(list(base) + self.fixed_generators, self.fixed_d)
        assign = {g.name: Polynomial.gen(g) for g in base}
        assign.update(self.psi)
        self.morphism = Morphism(self._source, self._target, assign)

    @property
    def base_generators(self):
        return self.borel.base_generators

    def fixed_fibration(self) -> RelativeSullivan:
        A = self.borel.fibration.base
        names = {g.name for g in self.fixed_generators}
        D = {n: polynomial_to_tensor(A, self.base_generators, p, names)
             for n, p in self.fixed_d.items()}
        return RelativeSullivan(A, self.fixed_generators, D, base_generators=self.base_generators)


@dataclass
class KModel:
    """Generator assignment of the composite ``Λ(V⊗A♯) -> Λ(Z⊗A♯) -> ΛZ``."""

    source: SectionModel
    target: FreeCDGA
    assignment: Dict[str, Polynomial]

    def linear_image(self, name: str) -> Dict[str, Fraction]:
        return {g.name: c for g, c in self.assignment[name].linear_part().items()}

    def linear_matrix(self, degree: int) -> Tuple[RationalMatrix, List[str], List[str]]:
        """Rows: ``Z`` generators of the degree; columns: section generators of the degree."""
        rows = [g.name for g in self.target.generators if g.degree == degree]
        cols = [g.name for g in self.source.generators if g.degree == degree]
        rpos = {n: i for i, n in enumerate(rows)}
        columns = []
        for c in cols:
            lin = self.linear_image(c)
            columns.append({rpos[z]: v for z, v in lin.items() if z in rpos})
        return RationalMatrix.from_columns(columns, len(rows)), rows, cols

    def maps_onto(self) -> Dict[str, List[str]]:
        """For each ``z``, the section generators whose linear image involves it."""
        out: Dict[str, List[str]] = {g.name: [] for g in self.target.generators}
        for g in self.source.generators:
            for z in self.linear_image(g.name):
                out[z].append(g.name)
        return out


def k_model(P: EquivariantPairModel) -> KModel:
    S_V = SectionModel(P.borel.fibration)
    S_Z = SectionModel(P.fixed_fibration())
    A = P.borel.fibration.base
    znames = {g.name for g in P.fixed_generators}
    gamma = {}
    for g in S_Z.generators:
        z, k = S_Z.provenance[g.name]
        gamma[g.name] = Polynomial.gen(next(h for h in P.fixed_generators if h.name == z)) \
            if k == A.unit else Polynomial.zero()
    assignment = {}
    for g in S_V.generators:
        v, k = S_V.provenance[g.name]
        t = polynomial_to_tensor(A, P.base_generators, P.psi[v], znames, where=f"psi({v})")
        assignment[g.name] = S_Z.rho_inverse_tensor(t, k).substitute(gamma)
    # checks commutation with the differentials
    Morphism(S_V.algebra, P.fixed_model, assignment)
    return KModel(S_V, P.fixed_model, assignment)


@dataclass
class Verdict:
    verdict: str
    detail: Dict[str, object] = field(default_factory=dict)

    def __bool__(self):
        return self.verdict in ("Injective", "NotEquivalence", "QuasiIsomorphism")


def pi_k_injective_check(K: KModel) -> Verdict:
    """Surjectivity on indecomposables, degree by degree."""
    degrees = sorted({g.degree for g in K.target.generators})
    table = {}
    ok = True
    for d in degrees:
        M, rows, cols = K.linear_matrix(d)
        r = M.rank() if cols else 0
        table[d] = {"rank": r, "dim_Z": len(rows)}
        ok &= r == len(rows)
    return Verdict("Injective" if ok else "NotInjective", {"degrees": table})


# ---------------------------------------------------------------------------
# indecomposables and localization
# ---------------------------------------------------------------------------

@dataclass
class Indecomposables:
    names: List[str]
    parity: List[int]
    D1: PolyMatrix      # entry [target][source]

    def column(self, name: str) -> Dict[str, Polynomial]:
        j = self.names.index(name)
        return {self.names[i]: self.D1.entries[i][j] for i in range(len(self.names))
                if self.D1.entries[i][j]}


def indecomposables(B: BorelModel) -> Indecomposables:
    """The ``R``-linear part of the untruncated relative differential."""
    if B.poly_D is None:
        raise Preconditions("indecomposables need the differential over the polynomial ring")
    fiber = B.fibration.fiber
    fnames = {g.name for g in fiber}
    zero = {n: Polynomial.zero() for n in fnames}
    for v in fiber:
        if B.poly_D.get(v.name, Polynomial.zero()).substitute(zero):
            raise Preconditions("zero is not a retraction; shift the model by a retraction first")
    names = [g.name for g in fiber]
    idx = {n: i for i, n in enumerate(names)}
    entries = [[Polynomial.zero() for _ in names] for _ in names]
    for v in fiber:
        Dv = B.poly_D.get(v.name, Polynomial.zero())
        for m, c in Dv.terms.items():
            fib = [(g, e) for g, e in m if g.name in fnames]
            if len(fib) != 1 or fib[0][1] != 1:
                continue
            w = fib[0][0]
            coef = Polynomial.monomial(tuple((g, e) for g, e in m if g.name not in fnames), c)
            if coef.constant():
                raise Preconditions(f"D({v.name}) has a linear part over Q; the fiber model is not minimal")
            entries[idx[w.name]][idx[v.name]] = entries[idx[w.name]][idx[v.name]] + coef
    D1 = PolyMatrix(entries, variables=B.base_generators, row_labels=names, col_labels=names)
    if not (D1 @ D1).is_zero():
        raise CDGAError("D1 does not square to zero")
    return Indecomposables(names, [g.degree % 2 for g in fiber], D1)


def is_T_minimal(I: Indecomposables) -> bool:
    return I.D1.is_zero()


def _block_rank(I: Indecomposables, src_parity: int) -> int:
    cols = [j for j, p in enumerate(I.parity) if p == src_parity]
    rows = [i for i, p in enumerate(I.parity) if p != src_parity]
    if not cols or not rows:
        return 0
    sub = PolyMatrix([[I.D1.entries[i][j] for j in cols] for i in rows],
                     variables=I.D1.variables)
    return poly_matrix_rank(sub)


def indecomposable_homology(I: Indecomposables) -> Tuple[int, int]:
    """Ranks of ``H(K ⊗ V, D1)`` in even and odd parity."""
    n_even = I.parity.count(0)
    n_odd = I.parity.count(1)
    r_even = _block_rank(I, 0)   # even -> odd
    r_odd = _block_rank(I, 1)    # odd -> even
    return n_even - r_even - r_odd, n_odd - r_odd - r_even


def localized_cohomology_rank(B: BorelModel, bound: Optional[int] = None) -> Tuple[int, int]:
    """Rank over ``Q(a)`` of ``H(R ⊗ ΛV, D)`` by parity, for circle actions.

    Read off from the dimensions in two consecutive high degrees, where the
    torsion has died; stability is checked one period earlier.
    """
    if B.torus_rank != 1:
        raise Preconditions("localized cohomology is computed for circle actions only")
    total = B.total_model()
    if bound is None:
        bound = 4 + 2 * sum(g.degree for g in B.fibration.fiber)
    bound += bound % 2
    dims = [h.dim for h in cohomology(total, bound + 1)]
    even, odd = dims[bound], dims[bound + 1]
    if (dims[bound - 2], dims[bound - 1]) != (even, odd):
        raise ArithmeticError("cohomology dimensions have not stabilised; raise the bound")
    return even, odd


def _model_cohomology(Z: FreeCDGA, bound: int) -> Tuple[int, int]:
    if not Z.generators:
        return 1, 0
    dims = [h.dim for h in cohomology(Z, bound)]
    if any(dims[-4:]):
        raise ArithmeticError("fixed-point model has cohomology near the bound; raise it")
    return sum(dims[0::2]), sum(dims[1::2])


@dataclass
class LocalizationReport:
    indecomposable_homology: Tuple[int, int]
    fixed_generators: Tuple[int, int]
    cohomology_rank: Optional[Tuple[int, int]]
    fixed_cohomology: Optional[Tuple[int, int]]
    verdict: str

    @property
    def homology_rank(self) -> int:
        return sum(self.indecomposable_homology)

    @property
    def cohomology_total(self) -> Optional[int]:
        return sum(self.cohomology_rank) if self.cohomology_rank else None


def localize_check(B: BorelModel, fixed_components: Sequence[FreeCDGA],
                   bound: Optional[int] = None) -> LocalizationReport:
    """Compare the localized indecomposables (and, for circles, localized cohomology)
    with the fixed point set given as a list of component models."""
    I = indecomposables(B)
    hom = indecomposable_homology(I)
    zev = sum(len(C.even()) for C in fixed_components)
    zodd = sum(len(C.odd()) for C in fixed_components)
    coh = fixed = None
    ok = hom == (zev, zodd)
    if B.torus_rank == 1:
        coh = localized_cohomology_rank(B, bound)
        cb = 4 + 2 * max([sum(g.degree for g in C.generators) for C in fixed_components] + [1])
        parts = [_model_cohomology(C, cb) for C in fixed_components]
        fixed = (sum(p[0] for p in parts), sum(p[1] for p in parts))
        ok &= coh == fixed
    return LocalizationReport(hom, (zev, zodd), coh, fixed,
                              "QuasiIsomorphism" if ok else "Mismatch")


# ---------------------------------------------------------------------------
# circle actions: the adapted bases and the never-equivalence statement
# ---------------------------------------------------------------------------

@dataclass
class AuxTriple:
    w: Polynomial
    z: str
    exponent: int


@dataclass
class AuxBasis:
    triples: List[AuxTriple]
    discrepancies: List[str]


def lemma_aux_basis(P: EquivariantPairModel) -> AuxBasis:
    """Find ``w_j`` with ``ψ(w_j) = a^{m_j} z_j`` modulo decomposables, per degree of ``V``."""
    if P.borel.torus_rank != 1:
        raise Preconditions("adapted bases are computed for circle actions")
    a = P.base_generators[0]
    fiber = P.borel.fibration.fiber
    zs = P.fixed_generators
    triples, notes = [], []
    for d in sorted({v.degree for v in fiber}):
        vs = [v for v in fiber if v.degree == d]
        # rows: z of matching parity, smaller exponent first
        rows = sorted([z for z in zs if z.degree <= d and (d - z.degree) % 2 == 0],
                      key=lambda z: (-z.degree, z))
        if not rows:
            continue
        cols = []
        for v in vs:
            col = {}
            for m, c in P.psi[v.name].terms.items():
                zpart = [(g, e) for g, e in m if g != a]
                if len(zpart) == 1 and zpart[0][1] == 1 and zpart[0][0] in rows:
                    col[rows.index(zpart[0][0])] = c
            cols.append(col)
        M = RationalMatrix(cols, len(rows))   # one row per v
        rref, pivots = M.rref()
        # express each reduced row in terms of the original v's
        for r, p in zip(rref, pivots):
            combo = _solve_combination(cols, r, len(rows))
            w = Polynomial.zero()
            for v, c in zip(vs, combo):
                if c:
                    w = w + Polynomial.gen(v).scale(c)
            z = rows[p]
            extra = [rows[j].name for j in r if j != p]
            if extra:
                notes.append(f"degree {d}: image of {w} also involves {extra}")
                continue
            triples.append(AuxTriple(w, z.name, (d - z.degree) // 2))
    if len(triples) != len(zs):
        notes.append(f"found {len(triples)} adapted pairs for {len(zs)} generators of Z")
    for t in triples:
        img = t.w.substitute(P.psi)
        lin = {g.name: c for g, c in _z_linear(img, a).items()}
        if lin != {t.z: Fraction(1)} or _a_power(img, t.z, a) != t.exponent:
            notes.append(f"verification failed for {t.w}")
    return AuxBasis(triples, notes)


def _solve_combination(cols, target_row, nrows) -> List[Fraction]:
    M = RationalMatrix.from_columns(cols, nrows)
    sol = M.solve(target_row)
    return [sol.get(j, Fraction(0)) for j in range(len(cols))]


def _z_linear(p: Polynomial, a: Generator) -> Dict[Generator, Fraction]:
    out: Dict[Generator, Fraction] = {}
    for m, c in p.terms.items():
        zpart = [(g, e) for g, e in m if g != a]
        if len(zpart) == 1 and zpart[0][1] == 1:
            out[zpart[0][0]] = out.get(zpart[0][0], 0) + c
    return {g: c for g, c in out.items() if c}


def _a_power(p: Polynomial, z: str, a: Generator) -> Optional[int]:
    for m in p.terms:
        zpart = [(g, e) for g, e in m if g != a]
        if len(zpart) == 1 and zpart[0][0].name == z:
            return dict(m).get(a, 0)
    return None


def never_equivalence_check(P: EquivariantPairModel, K: Optional[KModel] = None,
                            minimal: bool = True) -> Verdict:
    """Exhibit a positive-degree generator killed by the linear part of the model of ``k``."""
    if not minimal:
        raise Preconditions("the action must be minimal")
    B = P.borel
    if B.torus_rank != 1:
        raise Preconditions("circle actions only")
    fiber = B.fibration.fiber
    if not fiber:
        raise Preconditions("the space must be non trivial")
    if any(v.degree < 2 for v in fiber):
        raise Preconditions("the space must be simply connected")
    if not is_T_minimal(indecomposables(B)):
        raise Preconditions("the action is not minimal: D1 != 0")
    if not find_witnesses(B.fibration.fiber_model()).elliptic:
        raise Preconditions("the fiber is not certified elliptic")
    if K is None:
        K = k_model(P)
    S = K.source
    A = B.fibration.base
    a_idx = A.index_of_exponents((1,))
    odd = [v for v in fiber if v.odd and v.degree >= 3]
    if not odd:
        raise Preconditions("no odd generator of degree at least 3")
    v = odd[0]
    aux = {str(t.w): t for t in lemma_aux_basis(P).triples}
    t = aux.get(str(Polynomial.gen(v)))
    exponent = t.exponent if t is not None else None
    if exponent is None or exponent >= 1:
        g = S.generator(v.name, A.unit)
        case = "exponent >= 1" if exponent is not None else "no linear image"
    else:
        g = S.generator(v.name, a_idx)
        case = "exponent 0"
    if g is None or g.degree < 1 or K.linear_image(g.name):
        return Verdict("Undetermined", {"generator": v.name, "case": case})
    return Verdict("NotEquivalence", {"generator": g.name, "degree": g.degree, "case": case})


__all__ = [
    "FAMILIES", "BorelModel", "build_borel", "base_names", "total_model",
    "EquivariantPairModel", "KModel", "k_model", "Verdict", "pi_k_injective_check",
    "Indecomposables", "indecomposables", "is_T_minimal", "indecomposable_homology",
    "localized_cohomology_rank", "LocalizationReport", "localize_check", "AuxTriple",
    "AuxBasis", "lemma_aux_basis", "never_equivalence_check", "Preconditions",
]
