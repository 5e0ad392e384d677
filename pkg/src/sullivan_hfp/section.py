"""Relative Sullivan models over a finite base and the free models of their section spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cdga import CDGAError, DualCoalgebra, FiniteAlgebra, FreeCDGA, Vector
from .linalg import RationalMatrix, rational_roots
from .polynomial import (
    Generator,
    Monomial,
    Polynomial,
    expand_factors,
    make_generators,
    mono_degree,
)

# element of A ⊗ ΛV: {(basis index, fiber monomial): coefficient}
Tensor = Dict[Tuple[int, Monomial], Fraction]


class NonTriangular(ValueError):
    """The retraction equations cannot be solved one unknown at a time."""


class RetractionError(ValueError):
    pass


def _add_into(out: Dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class RelativeSullivan:
    """``A -> (A ⊗ ΛV, D) -> (ΛV, d)`` with ``A`` finite dimensional.

    ``D`` maps each fiber generator name to a :data:`Tensor`.  ``poly_D`` may
    carry the same differential written over an untruncated polynomial base,
    which is what the indecomposables need.
    """

    def __init__(self, base: FiniteAlgebra, fiber: Sequence[Generator],
                 D: Mapping[str, Tensor], poly_D: Optional[Mapping[str, Polynomial]] = None,
                 base_generators: Sequence[Generator] = (), check: bool = True):
        self.base = base
        self.fiber = sorted(fiber)
        self._by_name = {g.name: g for g in self.fiber}
        self.D: Dict[str, Tensor] = {}
        for g in self.fiber:
            t = {k: Fraction(c) for k, c in D.get(g.name, {}).items() if c}
            self.D[g.name] = t
        self.poly_D = dict(poly_D) if poly_D is not None else None
        self.base_generators = list(base_generators)
        if check:
            self.check()

    # -- constructors -----------------------------------------------------------
    @classmethod
    def from_polynomials(cls, base_vars: Sequence[Tuple[str, int]], N: int,
                         fiber: Sequence[Tuple[str, int]],
                         D: Mapping[str, "callable | Polynomial"]) -> "RelativeSullivan":
        """Build over ``Q[base_vars]/(degree > N)``.

        ``D`` values are polynomials in base and fiber generators, or callables
        receiving a name -> Polynomial dict.
        """
        bgens = make_generators(base_vars)
        fgens = make_generators(fiber, start=len(bgens))
        names = {g.name: Polynomial.gen(g) for g in bgens + fgens}
        polys = {}
        for n, f in D.items():
            polys[n] = f(names) if callable(f) else Polynomial.coerce(f)
        A = FiniteAlgebra.truncated_polynomial(bgens, N)
        return cls.from_symbolic(A, bgens, fgens, polys, keep_poly=True)

    @classmethod
    def from_symbolic(cls, A: FiniteAlgebra, base_symbols: Sequence[Generator],
                      fiber: Sequence[Generator], D: Mapping[str, Polynomial],
                      keep_poly: bool = False) -> "RelativeSullivan":
        """Convert polynomials in base symbols and fiber generators.

        ``base_symbols`` are either the polynomial variables of ``A`` or one symbol
        per basis element (in basis order) for table-defined algebras.
        """
        fset = {g.name for g in fiber}
        tensors = {}
        for name, p in D.items():
            if name not in fset:
                raise CDGAError(f"D given for unknown fiber generator {name!r}")
            tensors[name] = polynomial_to_tensor(A, base_symbols, p, fset, where=f"D({name})")
        return cls(A, fiber, tensors, poly_D=dict(D) if keep_poly else None,
                   base_generators=base_symbols)

    # -- basic data -----------------------------------------------------------------
    def generator(self, name: str) -> Generator:
        return self._by_name[name]

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.fiber]

    def tensor_degree(self, key: Tuple[int, Monomial]) -> int:
        b, m = key
        return self.base.degrees[b] + mono_degree(m)

    def tensor_mul(self, x: Tensor, y: Tensor) -> Tensor:
        A = self.base
        out: Tensor = {}
        for (i, m1), c1 in x.items():
            for (j, m2), c2 in y.items():
                prod = A.mul_basis(i, j)
                if not prod:
                    continue
                s = Polynomial.monomial(m1) * Polynomial.monomial(m2)
                if not s:
                    continue
                sign = -1 if mono_degree(m1) * A.degrees[j] % 2 else 1
                for k, ck in prod.items():
                    for mm, cm in s.terms.items():
                        _add_into(out, (k, mm), sign * c1 * c2 * ck * cm)
        return out

    def unit_tensor(self, m: Monomial = ()) -> Tensor:
        return {(self.base.unit, m): Fraction(1)}

    def D_monomial(self, m: Monomial) -> Tensor:
        """``D(1 ⊗ m)`` by the Leibniz rule."""
        factors = expand_factors(m)
        out: Tensor = {}
        for idx, g in enumerate(factors):
            dg = self.D[g.name]
            if not dg:
                continue
            left = factors[:idx]
            right = factors[idx + 1:]
            sign = -1 if sum(f.degree for f in left) % 2 else 1
            lm = _monomial_of(left)
            rm = _monomial_of(right)
            if lm is None or rm is None:
                continue
            term = self.tensor_mul(self.tensor_mul(self.unit_tensor(lm[1]), dg),
                                   self.unit_tensor(rm[1]))
            coef = lm[0] * rm[0] * sign
            for k, c in term.items():
                _add_into(out, k, coef * c)
        return out

    def D_tensor(self, x: Tensor) -> Tensor:
        A = self.base
        out: Tensor = {}
        for (b, m), c in x.items():
            for k, ck in A.d_basis(b).items():
                _add_into(out, (k, m), c * ck)
            if m:
                sign = -1 if A.degrees[b] % 2 else 1
                for key, cv in self.tensor_mul({(b, ()): Fraction(1)}, self.D_monomial(m)).items():
                    _add_into(out, key, sign * c * cv)
        return out

    def check(self):
        A = self.base
        if len(A.basis_in_degree(0)) != 1:
            raise CDGAError("the base algebra must be connected")
        for g in self.fiber:
            for key in self.D[g.name]:
                if self.tensor_degree(key) != g.degree + 1:
                    raise CDGAError(f"D({g.name}) has a term of the wrong degree")
                for h, _ in key[1]:
                    if self._by_name.get(h.name) != h:
                        raise CDGAError(f"D({g.name}) uses unknown generator {h.name!r}")
        for g in self.fiber:
            dd = self.D_tensor(self.D[g.name])
            if dd:
                raise CDGAError(f"D^2({g.name}) != 0")

    def fiber_differential(self) -> Dict[str, Polynomial]:
        """Fiber differential obtained by augmenting the base."""
        u = self.base.unit
        return {g.name: Polynomial({m: c for (b, m), c in self.D[g.name].items() if b == u})
                for g in self.fiber}

    def fiber_model(self) -> FreeCDGA:
        return FreeCDGA(self.fiber, self.fiber_differential())

    def tensor_str(self, x: Tensor) -> str:
        if not x:
            return "0"
        parts = []
        for (b, m), c in sorted(x.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            lab = self.base.labels[b]
            mono = str(Polynomial.monomial(m)) if m else ""
            body = "*".join(s for s in (lab if lab != "1" else "", mono) if s) or "1"
            parts.append(f"{c}*{body}" if c != 1 else body)
        return " + ".join(parts)

    def __repr__(self):
        return f"RelativeSullivan(base={self.base.labels}, fiber={[g.name for g in self.fiber]})"


def polynomial_to_tensor(A: FiniteAlgebra, base_symbols: Sequence[Generator], p: Polynomial,
                         fiber_names, where: str = "expression") -> Tensor:
    """Read a polynomial in base symbols and fiber generators as an element of ``A ⊗ ΛV``.

    Terms whose base part falls outside ``A`` (above the truncation) vanish.
    """
    base_symbols = list(base_symbols)
    bset = {g.name for g in base_symbols}
    poly_mode = A.exponents is not None and len(base_symbols) == len(A.variables or [])
    sym_index = {g.name: i for i, g in enumerate(base_symbols)}
    t: Tensor = {}
    for m, c in p.terms.items():
        bpart = tuple((g, e) for g, e in m if g.name in bset)
        fpart = tuple((g, e) for g, e in m if g.name not in bset)
        for g, _ in fpart:
            if g.name not in fiber_names:
                raise CDGAError(f"unknown generator {g.name!r} in {where}")
        if any(g.ordinal > h.ordinal for g, _ in bpart for h, _ in fpart):
            raise CDGAError("base symbols must precede fiber generators in the order")
        if poly_mode:
            vec = A.element(Polynomial.monomial(bpart))
        else:
            vec = {A.unit: Fraction(1)}
            for g, e in bpart:
                for _ in range(e):
                    vec = A.mul(vec, {sym_index[g.name]: Fraction(1)})
        for b, cb in vec.items():
            _add_into(t, (b, fpart), c * cb)
    return t


def _monomial_of(factors: Sequence[Generator]):
    """Monomial of an ordered product of generators as (sign, monomial)."""
    p = Polynomial.one()
    for f in factors:
        p = p * Polynomial.gen(f)
    if not p:
        return None
    (m, c), = p.terms.items()
    return c, m


# ---------------------------------------------------------------------------
# retractions
# ---------------------------------------------------------------------------

@dataclass
class Retraction:
    """``φ(v) ∈ A`` for every fiber generator, as sparse basis vectors."""

    values: Dict[str, Vector]

    def value(self, name: str) -> Vector:
        return self.values.get(name, {})

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def describe(self, A: FiniteAlgebra) -> str:
        return ", ".join(f"{n} -> {A.vector_str(v)}" for n, v in sorted(self.values.items()))


def apply_retraction(F: RelativeSullivan, phi: Retraction, x: Tensor) -> Vector:
    A = F.base
    out: Vector = {}
    for (b, m), c in x.items():
        vec: Vector = {b: Fraction(c)}
        for g in expand_factors(m):
            vec = A.mul(vec, phi.value(g.name))
            if not vec:
                break
        for k, v in vec.items():
            _add_into(out, k, v)
    return out


def check_retraction(F: RelativeSullivan, phi: Retraction):
    A = F.base
    for g in F.fiber:
        val = phi.value(g.name)
        for k in val:
            if A.degrees[k] != g.degree:
                raise RetractionError(f"φ({g.name}) has the wrong degree")
        lhs = apply_retraction(F, phi, F.D[g.name])
        rhs = A.apply_d(val)
        if lhs != rhs:
            raise RetractionError(f"φ does not commute with the differential on {g.name}")


def enumerate_retractions(F: RelativeSullivan) -> List[Retraction]:
    """Every retraction, provided the equations can be solved one unknown at a time."""
    A = F.base
    unknowns: List[Generator] = []
    sym_values: Dict[str, Dict[int, Polynomial]] = {}
    slots: Dict[str, Dict[int, str]] = {}
    for g in F.fiber:
        vals, names = {}, {}
        for k in A.basis_in_degree(g.degree):
            u = Generator(len(unknowns), f"u_{g.name}_{A.tag(k)}", 0)
            unknowns.append(u)
            vals[k] = Polynomial.gen(u)
            names[k] = u.name
        sym_values[g.name] = vals
        slots[g.name] = names

    def sym_mul(x: Dict[int, Polynomial], y: Dict[int, Polynomial]):
        out: Dict[int, Polynomial] = {}
        for i, p in x.items():
            for j, q in y.items():
                for k, c in A.mul_basis(i, j).items():
                    out[k] = out.get(k, Polynomial.zero()) + (p * q).scale(c)
        return {k: v for k, v in out.items() if v}

    equations: List[Polynomial] = []
    for g in F.fiber:
        lhs: Dict[int, Polynomial] = {}
        for (b, m), c in F.D[g.name].items():
            vec = {b: Polynomial.const(c)}
            for f in expand_factors(m):
                vec = sym_mul(vec, sym_values[f.name])
            for k, p in vec.items():
                lhs[k] = lhs.get(k, Polynomial.zero()) + p
        for i, p in sym_values[g.name].items():
            for k, c in A.d_basis(i).items():
                lhs[k] = lhs.get(k, Polynomial.zero()) - p.scale(c)
        equations.extend(p for p in lhs.values() if p)

    solutions = _solve_triangular(equations, [u.name for u in unknowns], {})
    out = []
    for sol in solutions:
        vals = {}
        for g in F.fiber:
            vals[g.name] = {k: sol[n] for k, n in slots[g.name].items() if sol[n]}
        phi = Retraction(vals)
        check_retraction(F, phi)
        out.append(phi)
    return out


def _solve_triangular(eqs: List[Polynomial], unknowns: List[str],
                      fixed: Dict[str, Fraction]) -> List[Dict[str, Fraction]]:
    subst = {n: Polynomial.const(v) for n, v in fixed.items()}
    live = []
    for e in eqs:
        e = e.substitute(subst) if subst else e
        if not e:
            continue
        if not e.generators():
            return []  # inconsistent branch
        live.append(e)
    free = [u for u in unknowns if u not in fixed]
    if not live:
        if free:
            raise NonTriangular(f"unknowns {free} are not determined by the equations")
        return [dict(fixed)]
    for e in live:
        gens = e.generators()
        if len(gens) == 1:
            (g,) = gens
            top = max(ex for m in e.terms for _, ex in m)
            coeffs = [Fraction(0)] * (top + 1)
            for m, c in e.terms.items():
                ex = m[0][1] if m else 0
                coeffs[top - ex] += c
            roots = sorted(set(rational_roots(coeffs)))
            out = []
            for r in roots:
                out.extend(_solve_triangular(live, unknowns, {**fixed, g.name: r}))
            return out
    for e in live:
        for g in sorted(e.generators()):
            with_g = {m: c for m, c in e.terms.items() if any(h == g for h, _ in m)}
            if list(with_g) == [((g, 1),)]:
                rest = e - Polynomial.monomial(((g, 1),), with_g[((g, 1),)])
                if rest.generators():
                    continue
                val = -rest.constant() / with_g[((g, 1),)]
                return _solve_triangular(live, unknowns, {**fixed, g.name: val})
    raise NonTriangular("retraction equations are not triangular: "
                        + "; ".join(str(e) for e in live[:3]))


def shift_retraction(F: RelativeSullivan, phi: Retraction) -> RelativeSullivan:
    """Change variables ``v -> v - φ(v)`` so that the zero map becomes a retraction."""
    A = F.base
    subst: Dict[str, Tensor] = {}
    for g in F.fiber:
        t: Tensor = {(A.unit, ((g, 1),)): Fraction(1)}
        for k, c in phi.value(g.name).items():
            _add_into(t, (k, ()), c)
        subst[g.name] = t
    newD = {}
    for g in F.fiber:
        out: Tensor = {}
        for (b, m), c in F.D[g.name].items():
            prod: Tensor = {(b, ()): Fraction(c)}
            for f in expand_factors(m):
                prod = F.tensor_mul(prod, subst[f.name])
            for k, v in prod.items():
                _add_into(out, k, v)
        for k, c in A.apply_d(phi.value(g.name)).items():
            _add_into(out, (k, ()), -c)
        newD[g.name] = out
    G = RelativeSullivan(A, F.fiber, newD, base_generators=F.base_generators)
    check_retraction(G, Retraction({}))
    return G


# ---------------------------------------------------------------------------
# section model
# ---------------------------------------------------------------------------

class SectionModel:
    """The free model ``Λ(V ⊗ A♯)`` with its differential.

    Generator ``v ⊗ e_k♯`` is named ``f"{v}__{tag}"`` and has degree
    ``|v| - |e_k|``.  ``provenance`` maps each name back to ``(v, k)``.

    Signs follow the evaluation ``v -> sum_k (v ⊗ e_k♯) ⊗ e_k``: a morphism out of
    the model is the same thing as an ``A``-linear morphism ``A ⊗ ΛV -> B ⊗ A``.
    Over an evenly graded base this reduces to the usual splitting and absorption
    rules with no extra signs.
    """

    def __init__(self, F: RelativeSullivan, pointed: bool = False):
        self.source = F
        self.pointed = pointed
        A = F.base
        self.coalgebra = DualCoalgebra(A)
        gens = []
        self.provenance: Dict[str, Tuple[str, int]] = {}
        self._gen: Dict[Tuple[str, int], Generator] = {}
        order = sorted(range(A.dim), key=lambda k: (A.degrees[k], k))
        for v in F.fiber:
            for k in order:
                if pointed and k == A.unit:
                    continue
                name = f"{v.name}__{A.tag(k)}"
                g = Generator(len(gens), name, v.degree - A.degrees[k])
                gens.append(g)
                self.provenance[name] = (v.name, k)
                self._gen[(v.name, k)] = g
        self._split_cache: Dict[Tuple[Tuple[Generator, ...], int, str], Polynomial] = {}
        diff = {g.name: self._differential(*self.provenance[g.name]) for g in gens}
        self.algebra = FreeCDGA(gens, diff)

    # -- generators ---------------------------------------------------------------
    def gen(self, v: str, k: int) -> Polynomial:
        g = self._gen.get((v, k))
        return Polynomial.gen(g) if g is not None else Polynomial.zero()

    def generator(self, v: str, k: int) -> Optional[Generator]:
        return self._gen.get((v, k))

    @property
    def generators(self) -> List[Generator]:
        return self.algebra.generators

    # -- ρ^{-1} ---------------------------------------------------------------------
    def split(self, factors: Tuple[Generator, ...], k: int, strategy: str = "left") -> Polynomial:
        """``ρ^{-1}[f_1 ⋯ f_p ⊗ e_k♯]`` with the factors in the given order."""
        key = (factors, k, strategy)
        hit = self._split_cache.get(key)
        if hit is not None:
            return hit
        A = self.source.base
        if not factors:
            res = Polynomial.one() if k == A.unit else Polynomial.zero()
        elif len(factors) == 1:
            res = self.gen(factors[0].name, k)
        else:
            res = Polynomial.zero()
            if strategy == "left":
                head, rest = factors[0], factors[1:]
                rest_deg = sum(f.degree for f in rest)
                for (i, j), c in self.coalgebra.delta(k).items():
                    g = self.gen(head.name, i)
                    if not g:
                        continue
                    tail = self.split(rest, j, strategy)
                    if not tail:
                        continue
                    sign = -1 if A.degrees[i] * (rest_deg + A.degrees[j]) % 2 else 1
                    res = res + (g * tail).scale(sign * c)
            else:
                rest, last = factors[:-1], factors[-1]
                for (i, j), c in self.coalgebra.delta(k).items():
                    g = self.gen(last.name, j)
                    if not g:
                        continue
                    front = self.split(rest, i, strategy)
                    if not front:
                        continue
                    sign = -1 if A.degrees[i] * (last.degree + A.degrees[j]) % 2 else 1
                    res = res + (front * g).scale(sign * c)
        self._split_cache[key] = res
        return res

    def rho_inverse(self, b: int, m: Monomial, k: int, strategy: str = "left") -> Polynomial:
        """``ρ^{-1}[e_b ⊗ m ⊗ e_k♯]``: absorb the base element, then split."""
        A = self.source.base
        factors = expand_factors(m)
        alpha_deg = mono_degree(m)
        out = Polynomial.zero()
        for (i, j), c in self.coalgebra.delta(k).items():
            if i != b:
                continue
            sign = -1 if A.degrees[b] * (alpha_deg + A.degrees[j]) % 2 else 1
            out = out + self.split(factors, j, strategy).scale(sign * c)
        return out

    def rho_inverse_tensor(self, x: Tensor, k: int, strategy: str = "left") -> Polynomial:
        out = Polynomial.zero()
        for (b, m), c in x.items():
            out = out + self.rho_inverse(b, m, k, strategy).scale(c)
        return out

    def _delta_dual(self, k: int) -> Dict[int, Fraction]:
        """Transpose of the base differential: ``e_k♯ -> sum_i c_ik e_i♯`` where ``d e_i = sum c_ik e_k``."""
        A = self.source.base
        out = {}
        for i in range(A.dim):
            c = A.d_basis(i).get(k)
            if c:
                out[i] = c
        return out

    def _differential(self, v: str, k: int) -> Polynomial:
        F = self.source
        res = self.rho_inverse_tensor(F.D[v], k)
        # sign from moving d_A past v⊗e_i♯, which has parity |v| + |e_k| + 1
        sign = 1 if (F.generator(v).degree + F.base.degrees[k]) % 2 == 0 else -1
        for i, c in self._delta_dual(k).items():
            res = res + self.gen(v, i).scale(sign * c)
        return res

    def differential(self, name: str) -> Polynomial:
        return self.algebra.d[name]

    def augmentation(self, phi: Retraction) -> Dict[str, Fraction]:
        """Scalars ``β(φ(v))`` on the degree-0 generators."""
        out = {}
        for g in self.algebra.generators:
            if g.degree != 0:
                continue
            v, k = self.provenance[g.name]
            out[g.name] = phi.value(v).get(k, Fraction(0))
        return out

    def describe(self) -> str:
        return self.algebra.describe()


def build_section_model(F: RelativeSullivan, pointed: bool = False) -> SectionModel:
    return SectionModel(F, pointed=pointed)


# ---------------------------------------------------------------------------
# path components
# ---------------------------------------------------------------------------

@dataclass
class ComponentModel:
    algebra: FreeCDGA
    retraction: Retraction
    section: SectionModel
    projection: Dict[str, Polynomial]  # image of every section generator
    degree_one_relations: List[Dict[str, Fraction]] = field(default_factory=list)

    @property
    def provenance(self) -> Dict[str, Tuple[str, int]]:
        return {g.name: self.section.provenance[g.name] for g in self.algebra.generators}

    def project(self, p: Polynomial) -> Polynomial:
        return p.substitute(self.projection)


def component_model(S: SectionModel, phi: Retraction) -> ComponentModel:
    """Quotient by the ideal generated by negative generators, ``d W^0`` and ``w - φ(w)``."""
    F = S.source
    check_retraction(F, phi)
    eps = S.augmentation(phi)
    gens = S.algebra.generators
    proj: Dict[str, Polynomial] = {}
    for g in gens:
        if g.degree < 0:
            proj[g.name] = Polynomial.zero()
        elif g.degree == 0:
            proj[g.name] = Polynomial.const(eps[g.name])
    for g in gens:
        if g.degree == -1:
            val = S.differential(g.name).substitute(proj)
            if val:
                raise RetractionError(f"augmentation does not kill d({g.name}) = {val}")
    deg1 = [g for g in gens if g.degree == 1]
    pos = {g.name: i for i, g in enumerate(deg1)}
    rows = []
    for g in gens:
        if g.degree != 0:
            continue
        val = S.differential(g.name).substitute(proj)
        row = {}
        for m, c in val.terms.items():
            if len(m) != 1 or m[0][1] != 1 or m[0][0].name not in pos:
                raise RetractionError(f"unexpected term in d({g.name}) after projection: {val}")
            row[pos[m[0][0].name]] = c
        rows.append(row)
    rref, pivots = RationalMatrix(rows, len(deg1)).rref() if rows else ([], [])
    relations = []
    for r, p in zip(rref, pivots):
        expr = Polynomial.zero()
        for j, c in r.items():
            if j != p:
                expr = expr - Polynomial.gen(deg1[j]).scale(c)
        proj[deg1[p].name] = expr
        relations.append({deg1[j].name: c for j, c in r.items()})
    keep = [g for g in gens if g.degree >= 1 and g.name not in proj]
    for g in keep:
        proj[g.name] = Polynomial.gen(g)
    diff = {g.name: S.differential(g.name).substitute(proj) for g in keep}
    C = FreeCDGA(keep, diff)
    return ComponentModel(C, phi, S, proj, relations)


def eliminate_contractibles(C: FreeCDGA) -> FreeCDGA:
    """Divide out pairs ``(u, du)`` whose differential has a linear part."""
    if any(g.degree <= 0 for g in C.generators):
        raise CDGAError("contractible elimination expects generators of positive degree")
    gens = list(C.generators)
    diff = dict(C.d)
    while True:
        found = None
        for u in gens:
            lin = diff[u.name].linear_part()
            if lin:
                w = min(lin)
                found = (u, w, lin[w])
                break
        if found is None:
            break
        u, w, c = found
        du = diff[u.name].substitute({u.name: Polynomial.zero()})
        rest = du - Polynomial.gen(w).scale(c)
        if w in rest.generators():
            raise CDGAError(f"cannot solve d({u.name}) for {w.name}")
        subst = {u.name: Polynomial.zero(), w.name: rest.scale(Fraction(-1) / c)}
        gens = [g for g in gens if g not in (u, w)]
        diff = {g.name: diff[g.name].substitute(subst) for g in gens}
    return FreeCDGA(gens, diff)


__all__ = [
    "Tensor", "NonTriangular", "RetractionError", "RelativeSullivan", "Retraction",
    "apply_retraction", "check_retraction", "enumerate_retractions", "shift_retraction",
    "polynomial_to_tensor", "SectionModel", "build_section_model", "ComponentModel", "component_model",
    "eliminate_contractibles",
]
