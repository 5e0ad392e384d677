"""Graded-commutative polynomials with exact rational coefficients.

A :class:`Polynomial` is a sparse map from canonical monomials to nonzero
:class:`fractions.Fraction` coefficients.  Generators of even degree are
polynomial variables, generators of odd degree are exterior.  Products carry
the Koszul sign ``(-1)^(|u||v|)`` for every transposition of two odd factors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple, Union


class AlgebraMismatch(ValueError):
    """Raised when generators of different algebras are combined."""


class Generator(NamedTuple):
    """A named generator.  Tuple order (ordinal, name) is the canonical order."""

    ordinal: int
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1

    def __repr__(self):
        return f"Generator({self.name!r}, {self.degree})"


# A monomial is a tuple of (Generator, exponent) pairs sorted by generator.
Monomial = Tuple[Tuple[Generator, int], ...]
Scalar = Union[int, Fraction]

ONE: Monomial = ()


def mono_degree(m: Monomial) -> int:
    return sum(g.degree * e for g, e in m)


def mono_parity(m: Monomial) -> int:
    return sum(e for g, e in m if g.odd) & 1


def mono_mul(a: Monomial, b: Monomial) -> Tuple[int, Optional[Monomial]]:
    """Return ``(sign, a*b)`` in canonical order, or ``(0, None)`` if it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    odd_left = sum(1 for g, _ in a if g.odd)
    out = []
    i = j = 0
    swaps = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ga, ea = a[i]
        gb, eb = b[j]
        if ga < gb:
            out.append(a[i])
            if ga.odd:
                odd_left -= 1
            i += 1
        elif gb < ga:
            out.append(b[j])
            if gb.odd:
                swaps += odd_left
            j += 1
        else:
            if ga.odd:
                return 0, None
            out.append((ga, ea + eb))
            i += 1
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in m)


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable exact-rational element of a free graded-commutative algebra."""

    __slots__ = ("terms", "_hash", "_gens")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = _frac(c)
        self.terms = clean
        self._hash = None
        self._gens = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        p._gens = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls._raw({ONE: _frac(c)} if c else {})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls.const(1)

    @classmethod
    def gen(cls, g: Generator) -> "Polynomial":
        return cls._raw({((g, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls._raw({m: _frac(c)} if c else {})

    @classmethod
    def coerce(cls, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, Generator):
            return cls.gen(x)
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")

    # -- inspection ---------------------------------------------------------
    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def generators(self) -> frozenset:
        if self._gens is None:
            self._gens = frozenset(g for m in self.terms for g, _ in m)
        return self._gens

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def constant(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def degrees(self) -> set:
        return {mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Degree of a homogeneous polynomial; ``None`` for zero."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"polynomial is not homogeneous: {self}")
        return next(iter(degs))

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self.terms.items() if mono_degree(m) == d})

    def homogeneous_parts(self) -> Dict[int, "Polynomial"]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_degree(m), {})[m] = c
        return {d: Polynomial._raw(t) for d, t in parts.items()}

    def linear_part(self) -> Dict[Generator, Fraction]:
        return {m[0][0]: c for m, c in self.terms.items() if len(m) == 1 and m[0][1] == 1}

    def word_length_part(self, k: int) -> "Polynomial":
        return Polynomial._raw(
            {m: c for m, c in self.terms.items() if sum(e for _, e in m) == k})

    def filter(self, pred) -> "Polynomial":
        return Polynomial._raw({m: c for m, c in self.terms.items() if pred(m)})

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.coerce(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other):
        return Polynomial.coerce(other) + (-self)

    def scale(self, c: Scalar) -> "Polynomial":
        if not c:
            return Polynomial.zero()
        c = _frac(c)
        return Polynomial._raw({m: c * v for m, v in self.terms.items()})

    def _check_compatible(self, other: "Polynomial"):
        mine = {g.name: g for g in self.generators()}
        for g in other.generators():
            h = mine.get(g.name)
            if h is not None and h != g:
                raise AlgebraMismatch(f"generator {g.name!r} used with two meanings: {h!r} vs {g!r}")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Generator):
            other = Polynomial.gen(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self.terms or not other.terms:
            return Polynomial.zero()
        self._check_compatible(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = mono_mul(m1, m2)
                if not s:
                    continue
                v = out.get(m, 0) + (c1 * c2 if s > 0 else -c1 * c2)
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return Polynomial.coerce(other) * self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- substitution -------------------------------------------------------
    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Apply the algebra map sending each named generator to its image.

        Generators absent from ``images`` are left fixed.
        """
        cache: Dict[Tuple[str, int], Polynomial] = {}
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            term = Polynomial.const(c)
            for g, e in m:
                key = (g.name, e)
                img = cache.get(key)
                if img is None:
                    base = images.get(g.name)
                    if base is None:
                        img = Polynomial.monomial(((g, e),))
                    else:
                        img = base ** e
                    cache[key] = img
                term = term * img
                if not term:
                    break
            for mm, cc in term.terms.items():
                v = out.get(mm, 0) + cc
                if v:
                    out[mm] = v
                else:
                    del out[mm]
        return Polynomial._raw(out)

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Evaluate a polynomial in even generators at rational values."""
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for g, e in m:
                v *= _frac(values[g.name]) ** e
            total += v
        return total

    # -- printing -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (mono_degree(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not m:
                body = str(a)
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{a}*{mono_str(m)}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self})"


def expand_factors(m: Monomial) -> Tuple[Generator, ...]:
    """List the factors of a monomial with repetition, in canonical order."""
    out = []
    for g, e in m:
        out.extend([g] * e)
    return tuple(out)


def make_generators(spec: Iterable[Tuple[str, int]], start: int = 0):
    """Create generators with consecutive ordinals from ``(name, degree)`` pairs."""
    return [Generator(start + i, name, deg) for i, (name, deg) in enumerate(spec)]


# -- exact division in commutative polynomial rings -------------------------

def _exps(m: Monomial, order) -> Tuple[int, ...]:
    d = dict((g.name, e) for g, e in m)
    return tuple(d.get(n, 0) for n in order)


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Divide ``p`` by ``q`` in a commutative ring of even generators.

    Raises ``ArithmeticError`` when the division is not exact.
    """
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    gens = sorted(p.generators() | q.generators())
    if any(g.odd for g in gens):
        raise ValueError("exact_divide requires even generators only")
    order = [g.name for g in gens]
    by_name = {g.name: g for g in gens}

    def lead(poly: Polynomial):
        return max(poly.terms.items(), key=lambda t: _exps(t[0], order))

    def from_exps(ex):
        return tuple((by_name[n], e) for n, e in zip(order, ex) if e)

    lq_m, lq_c = lead(q)
    lq_e = _exps(lq_m, order)
    quotient = Polynomial.zero()
    rem = p
    while rem:
        lm, lc = lead(rem)
        le = _exps(lm, order)
        diff = tuple(a - b for a, b in zip(le, lq_e))
        if any(d < 0 for d in diff):
            raise ArithmeticError(f"{q} does not divide {p}")
        t = Polynomial.monomial(from_exps(diff), lc / lq_c)
        quotient = quotient + t
        rem = rem - t * q
    return quotient
