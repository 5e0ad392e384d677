"""Free CDGAs, finite-dimensional graded algebras, their duals, and cohomology."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import RationalMatrix, reduce_modulo
from .polynomial import (
    Generator,
    Monomial,
    Polynomial,
    make_generators,
    mono_degree,
    mono_parity,
)


class CDGAError(ValueError):
    """Invalid algebraic data: wrong degrees, d^2 != 0, broken axioms."""


# ---------------------------------------------------------------------------
# free CDGAs
# ---------------------------------------------------------------------------

class FreeCDGA:
    """A free graded-commutative algebra ``(ΛW, d)`` on finitely many generators.

    Generators may have any integer degree.  The constructor checks that ``d``
    raises degree by one and squares to zero on every generator.
    """

    def __init__(self, generators: Sequence[Generator],
                 differential: Optional[Mapping[str, Polynomial]] = None,
                 check: bool = True):
        self.generators: List[Generator] = sorted(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise CDGAError(f"duplicate generator names in {names}")
        self._by_name = {g.name: g for g in self.generators}
        differential = dict(differential or {})
        unknown = set(differential) - set(self._by_name)
        if unknown:
            raise CDGAError(f"differential given for unknown generators {sorted(unknown)}")
        self.d: Dict[str, Polynomial] = {
            n: Polynomial.coerce(differential.get(n, Polynomial.zero())) for n in names}
        if check:
            self._check()

    def _check(self):
        own = set(self.generators)
        for g in self.generators:
            dg = self.d[g.name]
            stray = dg.generators() - own
            if stray:
                raise CDGAError(f"d({g.name}) uses foreign generators {sorted(s.name for s in stray)}")
            if dg and dg.degrees() != {g.degree + 1}:
                raise CDGAError(f"d({g.name}) = {dg} does not have degree {g.degree + 1}")
        for g in self.generators:
            dd = self.apply_d(self.d[g.name])
            if dd:
                raise CDGAError(f"d^2({g.name}) = {dd} != 0")

    # -- access ---------------------------------------------------------------
    def generator(self, name: str) -> Generator:
        return self._by_name[name]

    def gen(self, name: str) -> Polynomial:
        return Polynomial.gen(self._by_name[name])

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def even(self) -> List[Generator]:
        return [g for g in self.generators if not g.odd]

    def odd(self) -> List[Generator]:
        return [g for g in self.generators if g.odd]

    def is_zero_differential(self) -> bool:
        return all(not p for p in self.d.values())

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"FreeCDGA({gens})"

    def describe(self) -> str:
        lines = [f"gen {g.name} : {g.degree}" for g in self.generators]
        lines += [f"d {g.name} = {self.d[g.name]}" for g in self.generators if self.d[g.name]]
        return "\n".join(lines)

    # -- differential -----------------------------------------------------------
    def apply_d(self, p: Polynomial) -> Polynomial:
        """Extend ``d`` to ``p`` by the graded Leibniz rule."""
        own = self._by_name
        for g in p.generators():
            if own.get(g.name) != g:
                raise CDGAError(f"generator {g.name!r} does not belong to this algebra")
        out: Dict[Monomial, Fraction] = {}
        acc = Polynomial._raw(out)
        for m, c in p.terms.items():
            for idx, (g, e) in enumerate(m):
                dg = self.d[g.name]
                if not dg:
                    continue
                left = m[:idx]
                right = m[idx + 1:]
                coeff = c if mono_degree(left) % 2 == 0 else -c
                if g.odd:
                    mid = dg
                else:
                    coeff = coeff * e
                    mid = dg * Polynomial.monomial(((g, e - 1),)) if e > 1 else dg
                term = Polynomial.monomial(left, coeff) * mid * Polynomial.monomial(right)
                acc = acc + term
        return acc

    def restrict(self, keep: Iterable[str]) -> "FreeCDGA":
        keep = set(keep)
        return FreeCDGA([g for g in self.generators if g.name in keep],
                        {n: p for n, p in self.d.items() if n in keep})


@dataclass(frozen=True)
class Morphism:
    """A CDGA map between free algebras given on generators; checked on construction."""

    source: FreeCDGA
    target: FreeCDGA
    assignment: Mapping[str, Polynomial]

    def __post_init__(self):
        for g in self.source.generators:
            img = self.assignment.get(g.name, Polynomial.zero())
            if img and img.degrees() != {g.degree}:
                raise CDGAError(f"image of {g.name} has wrong degree: {img}")
            lhs = self.apply(self.source.d[g.name])
            rhs = self.target.apply_d(img)
            if lhs != rhs:
                raise CDGAError(f"morphism does not commute with d on {g.name}: {lhs} != {rhs}")

    def apply(self, p: Polynomial) -> Polynomial:
        images = {g.name: self.assignment.get(g.name, Polynomial.zero())
                  for g in self.source.generators}
        return p.substitute(images)


# ---------------------------------------------------------------------------
# monomial bases
# ---------------------------------------------------------------------------

def monomials_of_degree(gens: Sequence[Generator], degree: int) -> List[Monomial]:
    """All monomials of the given total degree in generators of positive degree."""
    gens = tuple(sorted(gens))
    if any(g.degree <= 0 for g in gens):
        raise CDGAError("monomial enumeration needs generators of positive degree")
    return list(_monos(gens, degree))


@lru_cache(maxsize=None)
def _monos(gens: Tuple[Generator, ...], degree: int) -> Tuple[Monomial, ...]:
    if degree == 0:
        return ((),)
    if not gens or degree < 0:
        return ()
    g, rest = gens[0], gens[1:]
    out = []
    top = 1 if g.odd else degree // g.degree
    for e in range(top + 1):
        for m in _monos(rest, degree - e * g.degree):
            out.append((((g, e),) + m) if e else m)
    return tuple(out)


# ---------------------------------------------------------------------------
# finite-dimensional algebras
# ---------------------------------------------------------------------------

Vector = Dict[int, Fraction]


class FiniteAlgebra:
    """Finite graded algebra with an explicit basis and multiplication table.

    ``table[(i, j)]`` is the product of basis elements ``i`` and ``j`` as a
    sparse vector.  ``differential[i]`` likewise; ``None`` means zero.  When the
    algebra is a truncated polynomial algebra, ``variables`` and ``exponents``
    record the monomial behind each basis element.
    """

    def __init__(self, labels: Sequence[str], degrees: Sequence[int],
                 table: Mapping[Tuple[int, int], Vector], unit: int = 0,
                 differential: Optional[Mapping[int, Vector]] = None,
                 variables: Optional[Sequence[Generator]] = None,
                 exponents: Optional[Sequence[Tuple[int, ...]]] = None,
                 check: bool = True):
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.unit = unit
        self.table = {k: {i: Fraction(v) for i, v in vec.items() if v}
                      for k, vec in table.items()}
        self.table = {k: v for k, v in self.table.items() if v}
        self.differential = {i: {k: Fraction(v) for k, v in vec.items() if v}
                             for i, vec in (differential or {}).items()}
        self.differential = {i: v for i, v in self.differential.items() if v}
        self.variables = list(variables) if variables is not None else None
        self.exponents = [tuple(e) for e in exponents] if exponents is not None else None
        if self.exponents is not None:
            self._exp_index = {e: i for i, e in enumerate(self.exponents)}
        if check:
            self.check()

    # -- constructors ---------------------------------------------------------
    @classmethod
    def truncated_polynomial(cls, variables: Sequence[Generator], N: int) -> "FiniteAlgebra":
        """``Q[variables] / (degree > N)`` for even positive-degree variables."""
        variables = sorted(variables)
        for v in variables:
            if v.odd or v.degree <= 0:
                raise CDGAError(f"truncation needs even positive-degree generators, got {v!r}")
        if N < 0:
            raise CDGAError("truncation degree must be non-negative")
        exps = []
        for deg in range(N + 1):
            for m in (_monos(tuple(variables), deg) if variables else ((),) if deg == 0 else ()):
                d = {g: e for g, e in m}
                exps.append(tuple(d.get(v, 0) for v in variables))
        exps.sort(key=lambda ex: (sum(e * v.degree for e, v in zip(ex, variables)),
                                  tuple(-e for e in ex)))
        index = {e: i for i, e in enumerate(exps)}
        degrees = [sum(e * v.degree for e, v in zip(ex, variables)) for ex in exps]
        table = {}
        for i, a in enumerate(exps):
            for j, b in enumerate(exps):
                s = tuple(x + y for x, y in zip(a, b))
                if s in index:
                    table[(i, j)] = {index[s]: Fraction(1)}
        labels = [_exp_label(ex, variables) for ex in exps]
        return cls(labels, degrees, table, unit=index[tuple(0 for _ in variables)],
                   variables=variables, exponents=exps, check=False)

    @classmethod
    def monomial_quotient(cls, basis: Sequence[Polynomial],
                          differential: Optional[Mapping[str, Polynomial]] = None) -> "FiniteAlgebra":
        """Algebra spanned by the given monomials; products outside the span vanish.

        Only valid when the complement of the span is an ideal (a monomial
        quotient of a free algebra); the axioms are re-checked.
        """
        monos = []
        for p in basis:
            if len(p) != 1 or next(iter(p.terms.values())) != 1:
                raise CDGAError(f"{p} is not a monomial")
            monos.append(next(iter(p.terms)))
        index = {m: i for i, m in enumerate(monos)}
        table = {}
        for i, a in enumerate(monos):
            for j, b in enumerate(monos):
                prod = Polynomial.monomial(a) * Polynomial.monomial(b)
                vec = {index[m]: c for m, c in prod.terms.items() if m in index}
                if vec:
                    table[(i, j)] = vec
        gens = sorted({g for m in monos for g, _ in m})
        dgen = {g.name: (differential or {}).get(g.name, Polynomial.zero()) for g in gens}
        free = FreeCDGA(gens, dgen, check=False)
        diff = {}
        for i, m in enumerate(monos):
            dm = free.apply_d(Polynomial.monomial(m))
            vec = {index[mm]: c for mm, c in dm.terms.items() if mm in index}
            if vec:
                diff[i] = vec
        labels = [str(Polynomial.monomial(m)) for m in monos]
        degrees = [mono_degree(m) for m in monos]
        return cls(labels, degrees, table, unit=index[()], differential=diff)

    @classmethod
    def point(cls) -> "FiniteAlgebra":
        return cls(["1"], [0], {(0, 0): {0: 1}}, unit=0, variables=[], exponents=[()],
                   check=False)

    # -- basic data -------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def tag(self, i: int) -> str:
        """Identifier-safe name of a basis element."""
        if i == self.unit:
            return "1"
        if self.exponents is not None:
            return "_".join(v.name if e == 1 else f"{v.name}p{e}"
                            for v, e in zip(self.variables, self.exponents[i]) if e)
        return self.labels[i]

    def index_of_exponents(self, ex: Tuple[int, ...]) -> Optional[int]:
        if self.exponents is None:
            raise CDGAError("basis is not indexed by monomials")
        return self._exp_index.get(tuple(ex))

    def index_of_label(self, label: str) -> int:
        return self.labels.index(label)

    def mul_basis(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), {})

    def mul(self, x: Vector, y: Vector) -> Vector:
        out: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.table.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    def d_basis(self, i: int) -> Vector:
        return self.differential.get(i, {})

    def apply_d(self, x: Vector) -> Vector:
        out: Vector = {}
        for i, a in x.items():
            for k, c in self.d_basis(i).items():
                out[k] = out.get(k, 0) + a * c
        return {k: v for k, v in out.items() if v}

    def has_differential(self) -> bool:
        return bool(self.differential)

    def element(self, p: Polynomial) -> Vector:
        """Vector of a polynomial in the algebra's variables (terms above N vanish)."""
        if self.exponents is None:
            raise CDGAError("algebra has no polynomial presentation")
        pos = {v.name: k for k, v in enumerate(self.variables)}
        out: Vector = {}
        for m, c in p.terms.items():
            ex = [0] * len(self.variables)
            for g, e in m:
                if g.name not in pos:
                    raise CDGAError(f"{g.name} is not a variable of the base algebra")
                ex[pos[g.name]] = e
            i = self._exp_index.get(tuple(ex))
            if i is not None:
                out[i] = out.get(i, 0) + c
        return {k: v for k, v in out.items() if v}

    def vector_str(self, x: Vector) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = x[i]
            lab = self.labels[i]
            if lab == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(lab)
            elif c == -1:
                parts.append(f"-{lab}")
            else:
                parts.append(f"{c}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")

    def basis_in_degree(self, d: int) -> List[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    def top_degree(self) -> int:
        return max(self.degrees)

    # -- axioms -------------------------------------------------------------------
    def check(self):
        n = self.dim
        u = self.unit
        if self.degrees[u] != 0:
            raise CDGAError("unit must have degree 0")
        if any(d < 0 for d in self.degrees):
            raise CDGAError("finite algebras here are non-negatively graded")
        for i in range(n):
            e = {i: Fraction(1)}
            if self.mul_basis(u, i) != e or self.mul_basis(i, u) != e:
                raise CDGAError(f"{self.labels[i]} is not fixed by the unit")
        for (i, j), vec in self.table.items():
            for k in vec:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise CDGAError(f"product {self.labels[i]}*{self.labels[j]} has wrong degree")
        for i in range(n):
            for j in range(n):
                sign = -1 if self.degrees[i] * self.degrees[j] % 2 else 1
                if self.mul_basis(i, j) != {k: sign * v for k, v in self.mul_basis(j, i).items()}:
                    raise CDGAError(f"{self.labels[i]}, {self.labels[j]} do not graded-commute")
        for i in range(n):
            for j in range(n):
                ij = self.mul_basis(i, j)
                for k in range(n):
                    if self.mul(ij, {k: 1}) != self.mul({i: 1}, self.mul_basis(j, k)):
                        raise CDGAError("multiplication is not associative on "
                                        f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})")
        if self.differential:
            for i, vec in self.differential.items():
                for k in vec:
                    if self.degrees[k] != self.degrees[i] + 1:
                        raise CDGAError(f"d({self.labels[i]}) has wrong degree")
                if self.apply_d(vec):
                    raise CDGAError(f"d^2({self.labels[i]}) != 0")
            for i in range(n):
                for j in range(n):
                    lhs = self.apply_d(self.mul_basis(i, j))
                    sign = -1 if self.degrees[i] % 2 else 1
                    rhs = self.mul(self.d_basis(i), {j: 1})
                    for k, v in self.mul({i: 1}, self.d_basis(j)).items():
                        rhs[k] = rhs.get(k, 0) + sign * v
                    rhs = {k: v for k, v in rhs.items() if v}
                    if lhs != rhs:
                        raise CDGAError(f"Leibniz fails on ({self.labels[i]}, {self.labels[j]})")

    def __repr__(self):
        return f"FiniteAlgebra({', '.join(self.labels)})"


def _exp_label(ex, variables) -> str:
    parts = [v.name if e == 1 else f"{v.name}^{e}" for v, e in zip(variables, ex) if e]
    return "*".join(parts) if parts else "1"


def truncate_free(A: FreeCDGA, N: int) -> FiniteAlgebra:
    """``ΛQ / (ΛQ)^{>N}`` for a polynomial algebra with zero differential."""
    if not A.is_zero_differential():
        raise CDGAError("truncate_free expects a zero differential")
    if any(g.odd for g in A.generators):
        raise CDGAError("truncate_free expects only even generators")
    return FiniteAlgebra.truncated_polynomial(A.generators, N)


def skeleton_truncate(A: FiniteAlgebra, n: int) -> FiniteAlgebra:
    """Quotient ``A / (A^{>n} ⊕ C^n)`` with ``C^n`` a complement of the degree-n cocycles.

    The complement is spanned by the basis elements that are not pivots of the
    reduced echelon basis of the cocycles, so it is deterministic.
    """
    deg_n = A.basis_in_degree(n)
    pos = {i: k for k, i in enumerate(deg_n)}
    # cocycles in degree n: kernel of d restricted to A^n
    nxt = A.basis_in_degree(n + 1)
    npos = {i: k for k, i in enumerate(nxt)}
    cols = [{npos[k]: v for k, v in A.d_basis(i).items()} for i in deg_n]
    M = RationalMatrix.from_columns(cols, len(nxt))
    kernel = M.nullspace()
    _, pivots = RationalMatrix(kernel, len(deg_n)).rref() if kernel else ([], [])
    keep_n = {deg_n[p] for p in pivots}
    keep = [i for i in range(A.dim) if A.degrees[i] < n or i in keep_n]
    new = {old: k for k, old in enumerate(keep)}

    def project(vec: Vector) -> Vector:
        return {new[k]: v for k, v in vec.items() if k in new}

    table = {}
    for i in keep:
        for j in keep:
            p = project(A.mul_basis(i, j))
            if p:
                table[(new[i], new[j])] = p
    diff = {}
    for i in keep:
        p = project(A.d_basis(i))
        if p:
            diff[new[i]] = p
    exps = [A.exponents[i] for i in keep] if A.exponents is not None else None
    del pos
    return FiniteAlgebra([A.labels[i] for i in keep], [A.degrees[i] for i in keep], table,
                         unit=new[A.unit], differential=diff, variables=A.variables,
                         exponents=exps)


# ---------------------------------------------------------------------------
# dual coalgebra
# ---------------------------------------------------------------------------

class DualCoalgebra:
    """The linear dual ``A♯`` with diagonal transposed from the multiplication.

    Basis element ``k`` is the dual of ``A``'s basis element ``k`` and sits in
    degree ``-|e_k|``.
    """

    def __init__(self, A: FiniteAlgebra):
        self.algebra = A
        delta: Dict[int, Dict[Tuple[int, int], Fraction]] = {k: {} for k in range(A.dim)}
        for (i, j), vec in A.table.items():
            for k, c in vec.items():
                delta[k][(i, j)] = c
        self._delta = delta
        self._iterated: Dict[Tuple[int, int], Dict[Tuple[int, ...], Fraction]] = {}

    def __len__(self):
        return self.algebra.dim

    def degree(self, k: int) -> int:
        return -self.algebra.degrees[k]

    def delta(self, k: int) -> Dict[Tuple[int, int], Fraction]:
        return self._delta[k]

    def counit(self, k: int) -> Fraction:
        return Fraction(1) if k == self.algebra.unit else Fraction(0)

    def delta_n(self, k: int, n: int) -> Dict[Tuple[int, ...], Fraction]:
        """Iterated diagonal ``Δ_n = (1 ⊗ ... ⊗ 1 ⊗ Δ) ∘ Δ_{n-1}``."""
        if n < 1:
            raise ValueError("n must be positive")
        key = (k, n)
        if key in self._iterated:
            return self._iterated[key]
        if n == 1:
            out = {(k,): Fraction(1)}
        else:
            out: Dict[Tuple[int, ...], Fraction] = {}
            for head, c in self.delta_n(k, n - 1).items():
                for (i, j), c2 in self._delta[head[-1]].items():
                    t = head[:-1] + (i, j)
                    out[t] = out.get(t, 0) + c * c2
            out = {t: v for t, v in out.items() if v}
        self._iterated[key] = out
        return out

    def check(self):
        """Verify coassociativity and the counit laws on every basis element."""
        A = self.algebra
        for k in range(A.dim):
            left: Dict[Tuple[int, int, int], Fraction] = {}
            right: Dict[Tuple[int, int, int], Fraction] = {}
            for (i, j), c in self._delta[k].items():
                for (p, q), c2 in self._delta[i].items():
                    left[(p, q, j)] = left.get((p, q, j), 0) + c * c2
                for (p, q), c2 in self._delta[j].items():
                    right[(i, p, q)] = right.get((i, p, q), 0) + c * c2
            left = {t: v for t, v in left.items() if v}
            right = {t: v for t, v in right.items() if v}
            if left != right:
                raise CDGAError(f"diagonal is not coassociative on {A.labels[k]}♯")
            lc: Dict[int, Fraction] = {}
            rc: Dict[int, Fraction] = {}
            for (i, j), c in self._delta[k].items():
                if self.counit(i):
                    lc[j] = lc.get(j, 0) + c
                if self.counit(j):
                    rc[i] = rc.get(i, 0) + c
            target = {k: Fraction(1)}
            if {a: b for a, b in lc.items() if b} != target or \
                    {a: b for a, b in rc.items() if b} != target:
                raise CDGAError(f"counit law fails on {A.labels[k]}♯")
        for (i, j), vec in A.table.items():
            for k, c in vec.items():
                if self._delta[k].get((i, j)) != c:
                    raise CDGAError("diagonal is not the transpose of multiplication")


def dualize(A: FiniteAlgebra) -> DualCoalgebra:
    return DualCoalgebra(A)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

@dataclass
class CohomologyGroup:
    degree: int
    dim: int
    representatives: List[Polynomial] = field(default_factory=list)


def cohomology(A: FreeCDGA, max_degree: int) -> List[CohomologyGroup]:
    """Betti numbers and echelon-form cocycle representatives in degrees ``0..max_degree``."""
    if any(g.degree <= 0 for g in A.generators):
        raise CDGAError("cohomology needs all generators in positive degree")
    gens = A.generators
    bases = {k: monomials_of_degree(gens, k) for k in range(max_degree + 2)}
    index = {k: {m: i for i, m in enumerate(b)} for k, b in bases.items()}

    def dmatrix(k: int) -> RationalMatrix:
        cols = []
        for m in bases[k]:
            dp = A.apply_d(Polynomial.monomial(m))
            cols.append({index[k + 1][mm]: c for mm, c in dp.terms.items()})
        return RationalMatrix.from_columns(cols, len(bases[k + 1]))

    mats = {k: dmatrix(k) for k in range(max_degree + 1)}
    out = []
    for k in range(max_degree + 1):
        kernel = mats[k].nullspace()
        if k == 0:
            image: List[Dict[int, Fraction]] = []
        else:
            prev = mats[k - 1]
            image = [dict(r) for r in prev.transpose().rows if r]
        img_rref, img_piv = (RationalMatrix(image, len(bases[k])).rref() if image else ([], []))
        reduced = [reduce_modulo(v, img_rref, img_piv) for v in kernel]
        reduced = [v for v in reduced if v]
        reps_rows, _ = (RationalMatrix(reduced, len(bases[k])).rref() if reduced else ([], []))
        reps = [Polynomial({bases[k][j]: c for j, c in r.items()}) for r in reps_rows]
        out.append(CohomologyGroup(k, len(reps), reps))
    return out


def betti_numbers(A: FreeCDGA, max_degree: int) -> List[int]:
    return [h.dim for h in cohomology(A, max_degree)]


def free_algebra(spec: Sequence[Tuple[str, int]], differential: Optional[Dict[str, str]] = None):
    """Convenience constructor used by tests and builders.

    ``differential`` maps names to callables ``gens -> Polynomial``.
    """
    gens = make_generators(spec)
    by = {g.name: Polynomial.gen(g) for g in gens}
    diff = {}
    for name, f in (differential or {}).items():
        diff[name] = f(by)
    return FreeCDGA(gens, diff)


__all__ = [
    "CDGAError", "FreeCDGA", "Morphism", "FiniteAlgebra", "DualCoalgebra", "CohomologyGroup",
    "monomials_of_degree", "truncate_free", "skeleton_truncate", "dualize", "cohomology",
    "betti_numbers", "free_algebra", "mono_parity", "product",
]
