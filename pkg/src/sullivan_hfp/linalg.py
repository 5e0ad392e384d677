"""Exact linear algebra over Q and over polynomial rings Q[a1, ..., am]."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .polynomial import Polynomial, exact_divide, mono_degree

Row = Dict[int, Fraction]


class RationalMatrix:
    """Sparse matrix of exact rationals, stored as a list of ``{col: value}`` rows.

    ``row_labels`` and ``col_labels`` are optional and carried through untouched.
    """

    def __init__(self, rows: Sequence[Dict[int, Fraction]], ncols: int,
                 row_labels=None, col_labels=None):
        self.rows: List[Row] = [{j: Fraction(v) for j, v in r.items() if v} for r in rows]
        self.ncols = ncols
        self.row_labels = row_labels
        self.col_labels = col_labels

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], **kw) -> "RationalMatrix":
        ncols = len(data[0]) if data else 0
        return cls([{j: v for j, v in enumerate(r) if v} for r in data], ncols, **kw)

    @classmethod
    def from_columns(cls, columns: Sequence[Dict[int, Fraction]], nrows: int) -> "RationalMatrix":
        rows: List[Row] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rows[i][j] = Fraction(v)
        return cls(rows, len(columns))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), self.ncols

    def to_dense(self) -> List[List[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "RationalMatrix":
        cols: List[Row] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return RationalMatrix(cols, len(self.rows), self.col_labels, self.row_labels)

    def rref(self) -> Tuple[List[Row], List[int]]:
        """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
        rows = [dict(r) for r in self.rows if r]
        pivots: List[int] = []
        out: List[Row] = []
        while rows:
            # leftmost available pivot column
            col = min(min(r) for r in rows)
            k = next(i for i, r in enumerate(rows) if col in r)
            prow = rows.pop(k)
            inv = 1 / prow[col]
            prow = {j: v * inv for j, v in prow.items()}
            new_rows = []
            for r in rows:
                f = r.get(col)
                if f:
                    r = _axpy(r, prow, -f)
                if r:
                    new_rows.append(r)
            rows = new_rows
            for idx, r in enumerate(out):
                f = r.get(col)
                if f:
                    out[idx] = _axpy(r, prow, -f)
            out.append(prow)
            pivots.append(col)
        order = sorted(range(len(pivots)), key=lambda i: pivots[i])
        return [out[i] for i in order], [pivots[i] for i in order]

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> List[Row]:
        """Basis of the kernel, one vector per free column (free variable = 1)."""
        rref, pivots = self.rref()
        pivset = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivset:
                continue
            vec = {free: Fraction(1)}
            for r, p in zip(rref, pivots):
                v = r.get(free)
                if v:
                    vec[p] = -v
            basis.append(vec)
        return basis

    def solve(self, rhs: Dict[int, Fraction]) -> Optional[Row]:
        """Solve ``M x = rhs`` with free variables set to zero; ``None`` if inconsistent."""
        aug = [dict(r) for r in self.rows]
        for i, v in rhs.items():
            if v:
                aug[i][self.ncols] = Fraction(v)
        rref, pivots = RationalMatrix(aug, self.ncols + 1).rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        sol: Row = {}
        for r, p in zip(rref, pivots):
            v = r.get(self.ncols)
            if v:
                sol[p] = v
        return sol

    def apply(self, x: Dict[int, Fraction]) -> Row:
        out: Row = {}
        for i, r in enumerate(self.rows):
            s = sum((v * x[j] for j, v in r.items() if j in x), Fraction(0))
            if s:
                out[i] = s
        return out


def _axpy(r: Row, p: Row, f: Fraction) -> Row:
    out = dict(r)
    for j, v in p.items():
        w = out.get(j, 0) + f * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    return out


def echelon_basis(vectors: Sequence[Row]) -> List[Row]:
    """Reduced echelon basis of the span of ``vectors`` (column order = index order)."""
    if not vectors:
        return []
    ncols = max((max(v) for v in vectors if v), default=-1) + 1
    return RationalMatrix(list(vectors), ncols).rref()[0]


def reduce_modulo(v: Row, basis: Sequence[Row], pivots: Sequence[int]) -> Row:
    """Reduce ``v`` against a reduced echelon basis with the given pivots."""
    for r, p in zip(basis, pivots):
        f = v.get(p)
        if f:
            v = _axpy(v, r, -f)
    return v


# -- membership in spans of polynomials -------------------------------------

def solve_membership(target: Polynomial, span: Sequence[Polynomial]) -> Optional[List[Fraction]]:
    """Coefficients ``c`` with ``sum(c_i * span_i) == target``, or ``None`` if absent.

    All inputs must be homogeneous of one common degree (zero is allowed).
    """
    degs = set()
    for p in [target, *span]:
        if not p.is_homogeneous():
            raise ValueError(f"inhomogeneous input: {p}")
        if p:
            degs.add(p.degree())
    if len(degs) > 1:
        raise ValueError(f"inputs have different degrees: {sorted(degs)}")
    index: Dict = {}
    cols = []
    for p in span:
        col = {}
        for m, c in p.terms.items():
            col[index.setdefault(m, len(index))] = c
        cols.append(col)
    rhs = {}
    for m, c in target.terms.items():
        if m not in index:
            return None
        rhs[index[m]] = c
    M = RationalMatrix.from_columns(cols, len(index))
    sol = M.solve(rhs)
    if sol is None:
        return None
    return [sol.get(j, Fraction(0)) for j in range(len(span))]


# -- matrices over Q[a1..am] ------------------------------------------------

class PolyMatrix:
    """Matrix with entries in a commutative polynomial ring of even generators."""

    def __init__(self, entries: Sequence[Sequence[Polynomial]], variables=None,
                 row_labels=None, col_labels=None):
        self.entries = [[Polynomial.coerce(e) for e in row] for row in entries]
        self.nrows = len(self.entries)
        self.ncols = len(self.entries[0]) if self.entries else 0
        found = set()
        for row in self.entries:
            for e in row:
                found |= e.generators()
        if any(g.odd for g in found):
            raise ValueError("PolyMatrix entries must lie in a ring of even generators")
        self.variables = sorted(found) if variables is None else list(variables)
        self.row_labels = row_labels
        self.col_labels = col_labels

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def degree_bound(self) -> int:
        return max((max((mono_degree(m) for m in e.terms), default=0)
                    for row in self.entries for e in row), default=0)

    def evaluate(self, point: Dict[str, Fraction]) -> RationalMatrix:
        return RationalMatrix.from_dense(
            [[e.evaluate(point) for e in row] for row in self.entries]) if self.entries \
            else RationalMatrix([], 0)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                s = Polynomial.zero()
                for k in range(self.ncols):
                    if self.entries[i][k] and other.entries[k][j]:
                        s = s + self.entries[i][k] * other.entries[k][j]
                row.append(s)
            out.append(row)
        return PolyMatrix(out)


def bareiss_rank(M: PolyMatrix) -> Tuple[int, List[Polynomial]]:
    """Fraction-free elimination; returns the rank and the pivot sequence."""
    A = [list(row) for row in M.entries]
    nrows, ncols = M.nrows, M.ncols
    prev = Polynomial.one()
    r = 0
    pivots: List[Polynomial] = []
    for c in range(ncols):
        if r >= nrows:
            break
        k = next((i for i in range(r, nrows) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        piv = A[r][c]
        for i in range(r + 1, nrows):
            f = A[i][c]
            for j in range(c + 1, ncols):
                num = piv * A[i][j] - f * A[r][j]
                A[i][j] = exact_divide(num, prev) if num else num
            A[i][c] = Polynomial.zero()
        prev = piv
        pivots.append(piv)
        r += 1
    return r, pivots


def poly_matrix_rank(M: PolyMatrix, check: bool = True, seed: int = 0) -> int:
    """Rank over the fraction field, by Bareiss elimination.

    With ``check`` the answer is cross-checked by evaluating at a random rational
    point where every pivot is nonzero; a disagreement raises ``ArithmeticError``.
    """
    rank, pivots = bareiss_rank(M)
    if check and M.variables and M.nrows and M.ncols:
        rng = random.Random(seed)
        for _ in range(50):
            point = {g.name: Fraction(rng.randint(-97, 97), rng.randint(1, 13))
                     for g in M.variables}
            if all(p.evaluate(point) != 0 for p in pivots):
                break
        else:
            raise ArithmeticError("could not find a point avoiding pivot zeros")
        numeric = M.evaluate(point).rank()
        if numeric != rank:
            raise ArithmeticError(
                f"fraction-free rank {rank} disagrees with evaluation rank {numeric}")
    return rank


# -- rational roots ---------------------------------------------------------

def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    v = Fraction(0)
    for c in coeffs:
        v = v * x + c
    return v


def _deflate(coeffs: List[Fraction], root: Fraction) -> List[Fraction]:
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * root)
    return out


def rational_roots(coeffs: Sequence) -> List[Fraction]:
    """All rational roots, with multiplicity, of ``coeffs[0]*t^n + ... + coeffs[n]``."""
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if not cs:
        raise ValueError("the zero polynomial has no well-defined roots")
    roots: List[Fraction] = []
    while len(cs) > 1 and cs[-1] == 0:
        roots.append(Fraction(0))
        cs.pop()
    if len(cs) > 1:
        den = 1
        for c in cs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in cs]
        cands = set()
        for p in _divisors(ints[-1]):
            for q in _divisors(ints[0]):
                cands.add(Fraction(p, q))
                cands.add(Fraction(-p, q))
        for x in sorted(cands):
            while len(cs) > 1 and _horner(cs, x) == 0:
                roots.append(x)
                cs = _deflate(cs, x)
    for x in roots:
        assert _horner([Fraction(c) for c in coeffs], x) == 0
    return sorted(roots)
