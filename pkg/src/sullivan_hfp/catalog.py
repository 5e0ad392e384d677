"""Recognise small Sullivan models as products of familiar spaces.

Matching is syntactic: the model is split into blocks of generators linked by
their differentials, and each block is compared against a short list of
presentations after the obvious changes of variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .cdga import FreeCDGA
from .polynomial import Generator, Polynomial


@dataclass(frozen=True)
class Factor:
    kind: str          # "S", "CP", "SO/U"
    param: int         # sphere dimension, projective dimension, or n for SO(n+2)/U((n+2)/2)

    def __str__(self):
        if self.kind == "S":
            return f"S^{self.param}"
        if self.kind == "CP":
            return f"CP^{self.param}"
        n = self.param
        return f"SO({n + 2})/U({(n + 2) // 2})"

    def canonical(self) -> "Factor":
        # S^2 and CP^1 share a minimal model
        if self.kind == "CP" and self.param == 1:
            return Factor("S", 2)
        if self.kind == "SO/U" and self.param == 2:
            return Factor("S", 2)
        return self


@dataclass
class Identification:
    factors: List[Factor] = field(default_factory=list)
    unknown: List[str] = field(default_factory=list)

    @property
    def known(self) -> bool:
        return not self.unknown

    def key(self) -> Tuple[Tuple[str, int], ...]:
        return tuple(sorted((f.canonical().kind, f.canonical().param) for f in self.factors))

    def __str__(self):
        if self.unknown:
            return "Unknown(" + ", ".join(self.unknown) + ")"
        if not self.factors:
            return "point"
        return " x ".join(str(f) for f in sorted(self.factors, key=_factor_order))


def _factor_order(f: Factor):
    return ({"S": 0, "CP": 1, "SO/U": 2}[f.kind], f.param)


def product_of(*factors: Factor) -> Identification:
    return Identification(list(factors))


def _blocks(C: FreeCDGA) -> List[List[Generator]]:
    parent = {g.name: g.name for g in C.generators}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in C.generators:
        for h in C.d[g.name].generators():
            parent[find(g.name)] = find(h.name)
    groups: Dict[str, List[Generator]] = {}
    for g in C.generators:
        groups.setdefault(find(g.name), []).append(g)
    return sorted(groups.values(), key=lambda b: b[0])


def _single_even_block(C: FreeCDGA, x: Generator, odds: List[Generator]) -> Optional[List[Factor]]:
    powers = []
    for y in odds:
        dy = C.d[y.name]
        if len(dy) != 1:
            return None
        (m, c), = dy.terms.items()
        if len(m) != 1 or m[0][0] != x:
            return None
        powers.append((m[0][1], c, y))
    if not powers:
        return None
    # y_i - (c_i / c_min) x^{k_i - k_min} y_min is a cocycle: an odd sphere
    k_min = min(k for k, _, _ in powers)
    out = []
    if k_min == 1:
        return None  # linear part; should have been eliminated
    if k_min == 2:
        out.append(Factor("S", x.degree))
    elif x.degree == 2:
        out.append(Factor("CP", k_min - 1))
    else:
        return None
    used_min = False
    for k, c, y in powers:
        if k == k_min and not used_min:
            used_min = True
            continue
        # degree of the corrected generator equals |y|
        out.append(Factor("S", y.degree))
    return out


def _grassmannian_block(C: FreeCDGA, evens: List[Generator], odds: List[Generator]) -> Optional[Factor]:
    """``x_s`` in degree ``2s`` (s = 1..n/2), ``y_r`` in degree ``2r-1`` (r = 2..n) with
    ``d y_r`` a nonzero multiple of ``sum_{s+t=r} x_s x_t`` (ordered pairs)."""
    h = len(evens)
    n = 2 * h
    xs = sorted(evens, key=lambda g: g.degree)
    if [g.degree for g in xs] != [2 * s for s in range(1, h + 1)]:
        return None
    ys = sorted(odds, key=lambda g: g.degree)
    if [g.degree for g in ys] != [2 * r - 1 for r in range(2, n + 1)]:
        return None
    X = {s: Polynomial.gen(xs[s - 1]) for s in range(1, h + 1)}
    for r, y in zip(range(2, n + 1), ys):
        target = Polynomial.zero()
        for s in range(1, h + 1):
            t = r - s
            if 1 <= t <= h:
                target = target + X[s] * X[t]
        dy = C.d[y.name]
        if not target or not dy:
            return None
        ratio = _ratio(dy, target)
        if ratio is None:
            return None
    return Factor("SO/U", n)


def _ratio(p: Polynomial, q: Polynomial) -> Optional[Fraction]:
    if set(p.terms) != set(q.terms):
        return None
    ratios = {p.terms[m] / q.terms[m] for m in p.terms}
    return ratios.pop() if len(ratios) == 1 else None


def identify_catalog(C: FreeCDGA) -> Identification:
    out = Identification()
    for block in _blocks(C):
        evens = [g for g in block if not g.odd]
        odds = [g for g in block if g.odd]
        names = "{" + ", ".join(g.name for g in block) + "}"
        if not evens:
            if len(odds) == 1 and not C.d[odds[0].name]:
                out.factors.append(Factor("S", odds[0].degree))
            else:
                out.unknown.append(names)
            continue
        if len(evens) == 1:
            found = _single_even_block(C, evens[0], odds)
        else:
            g = _grassmannian_block(C, evens, odds)
            found = [g] if g is not None else None
        if found is None:
            out.unknown.append(names)
        else:
            out.factors.extend(found)
    return out
