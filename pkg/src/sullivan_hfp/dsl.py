"""A small line-oriented language for CDGAs, fibrations and torus-action data.

Example::

    base poly a:2 truncate 4
    gen x : 2
    gen y : 3
    d y = x^2 + 1/2*a*x
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .cdga import CDGAError, FiniteAlgebra, FreeCDGA
from .polynomial import Generator, Polynomial

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
FAMILY_PARAMS = {
    "odd_sphere": {"n", "torus", "N"},
    "even_sphere": {"n", "lambda", "N"},
    "cp_n": {"n", "lambda", "N"},
}


@dataclass
class Diagnostic:
    severity: str
    line: int
    col: int
    message: str
    suggestion: Optional[str] = None

    def __str__(self):
        s = f"{self.line}:{self.col}: {self.severity}: {self.message}"
        if self.suggestion:
            s += f" (hint: {self.suggestion})"
        return s


class ParseError(Exception):
    def __init__(self, diagnostics: List[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str, line: int, col0: int):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            toks.append(("num", m.group(1), col0 + m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), col0 + m.start(2)))
        elif m.group(3) and not m.group(3).isspace():
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError([Diagnostic("error", line, col0 + m.start(3),
                                             f"unexpected character {ch!r}")])
            toks.append(("op", ch, col0 + m.start(3)))
        pos = m.end()
    return toks


class _ExprParser:
    def __init__(self, text: str, names: Dict[str, Generator], line: int, col0: int):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.names = names
        self.line = line
        self.end_col = col0 + len(text)

    def error(self, msg, col=None, hint=None):
        if col is None:
            col = self.toks[self.i][2] if self.i < len(self.toks) else self.end_col
        raise ParseError([Diagnostic("error", self.line, col, msg, hint)])

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind=None, value=None):
        t = self.peek()
        if t is None or (kind and t[0] != kind) or (value and t[1] != value):
            self.error(f"expected {value or kind}")
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            self.error("empty expression")
        p = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() and self.peek()[1] in "+-" and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() and self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        t = self.peek()
        if t and t[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        p = self.atom()
        if self.peek() and self.peek()[:2] == ("op", "^"):
            self.take()
            e = self.take("num")
            p = p ** int(e[1])
        return p

    def atom(self):
        t = self.peek()
        if t is None:
            self.error("unexpected end of expression")
        if t[0] == "num":
            self.take()
            num = int(t[1])
            if self.peek() and self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.take("num")
                if int(den[1]) == 0:
                    self.error("division by zero", den[2])
                return Polynomial.const(Fraction(num, int(den[1])))
            return Polynomial.const(num)
        if t[0] == "name":
            self.take()
            g = self.names.get(t[1])
            if g is None:
                hint = _closest(t[1], self.names)
                self.error(f"unknown name {t[1]!r}", t[2], f"did you mean {hint!r}?" if hint else None)
            return Polynomial.gen(g)
        if t[1] == "(":
            self.take()
            p = self.expr()
            self.take("op", ")")
            return p
        self.error(f"unexpected {t[1]!r}")


def _closest(word, names):
    best = None
    for n in names:
        if n.lower() == word.lower() or n.startswith(word) or word.startswith(n):
            best = n
            break
    return best


def parse_expression(text: str, names: Dict[str, Generator], line: int = 1, col: int = 1) -> Polynomial:
    return _ExprParser(text, names, line, col).parse()


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

@dataclass
class BaseDecl:
    kind: str                                   # "poly" or "table"
    variables: List[Tuple[str, int]] = field(default_factory=list)
    truncate: int = 0
    basis: List[Tuple[str, int]] = field(default_factory=list)
    products: Dict[Tuple[str, str], str] = field(default_factory=dict)
    differential: Dict[str, str] = field(default_factory=dict)


@dataclass
class BorelDecl:
    family: str
    params: Dict[str, str] = field(default_factory=dict)


@dataclass
class ModelDocument:
    generators: List[Tuple[str, int]] = field(default_factory=list)
    differentials: Dict[str, str] = field(default_factory=dict)
    base: Optional[BaseDecl] = None
    borel: Optional[BorelDecl] = None
    retraction: Dict[str, str] = field(default_factory=dict)
    fixed_generators: List[Tuple[str, int]] = field(default_factory=list)
    fixed_differentials: Dict[str, str] = field(default_factory=dict)
    psi: Dict[str, str] = field(default_factory=dict)
    fixed_points: int = 0
    directives: List[str] = field(default_factory=list)

    # -- derived objects ------------------------------------------------------------
    def symbol_table(self) -> Dict[str, Generator]:
        """All names with their generators, in the canonical order: base, fiber, fixed."""
        table: Dict[str, Generator] = {}
        k = 0
        for name, deg in self._base_symbols():
            table[name] = Generator(k, name, deg)
            k += 1
        for name, deg in self._fiber():
            table[name] = Generator(k, name, deg)
            k += 1
        for name, deg in self.fixed_generators:
            table[name] = Generator(k, name, deg)
            k += 1
        return table

    def _base_symbols(self) -> List[Tuple[str, int]]:
        if self.borel is not None:
            from .equivariant import base_names
            return [(n, 2) for n in base_names(int(self.borel.params.get("torus", "1")))]
        if self.base is None:
            return []
        if self.base.kind == "poly":
            return list(self.base.variables)
        return [(n, d) for n, d in self.base.basis if n != "1"]

    def _fiber(self) -> List[Tuple[str, int]]:
        if self.borel is not None:
            return [(g.name, g.degree) for g in self.borel_model().fibration.fiber]
        return list(self.generators)

    def is_fibration(self) -> bool:
        return self.base is not None or self.borel is not None

    def algebra(self) -> FreeCDGA:
        """The plain CDGA, or the fiber of a fibration."""
        if self.is_fibration():
            return self.fibration().fiber_model()
        names = self.symbol_table()
        gens = [names[n] for n, _ in self.generators]
        diff = {n: parse_expression(t, names) for n, t in self.differentials.items()}
        return FreeCDGA(gens, diff)

    def borel_model(self):
        from .equivariant import build_borel
        p = self.borel.params
        kw = {"n": int(p["n"])}
        if "torus" in p:
            kw["torus"] = int(p["torus"])
        if "N" in p:
            kw["N"] = int(p["N"])
        if "lambda" in p:
            vals = [Fraction(v) for v in p["lambda"].split(",")]
            kw["lam"] = vals if self.borel.family == "cp_n" else vals[0]
        return build_borel(self.borel.family, **kw)

    def base_algebra(self) -> Tuple[FiniteAlgebra, List[Generator]]:
        names = self.symbol_table()
        b = self.base
        if b.kind == "poly":
            vars_ = [names[n] for n, _ in b.variables]
            return FiniteAlgebra.truncated_polynomial(vars_, b.truncate), vars_
        labels = [n for n, _ in b.basis]
        degrees = [d for _, d in b.basis]
        idx = {n: i for i, n in enumerate(labels)}
        table = {}
        for i in range(len(labels)):
            table[(0, i)] = {i: 1}
            table[(i, 0)] = {i: 1}
        for (u, v), text in b.products.items():
            vec = self._linear_in_basis(text, idx, names)
            table[(idx[u], idx[v])] = vec
            sign = -1 if degrees[idx[u]] * degrees[idx[v]] % 2 else 1
            table[(idx[v], idx[u])] = {k: sign * c for k, c in vec.items()}
        diff = {idx[u]: self._linear_in_basis(t, idx, names) for u, t in b.differential.items()}
        A = FiniteAlgebra(labels, degrees, table, unit=0, differential=diff)
        symbols = [Generator(-1, "_unit", 0)] + [names[n] for n in labels[1:]]
        return A, symbols

    @staticmethod
    def _linear_in_basis(text, idx, names):
        p = parse_expression(text, names)
        vec = {}
        for m, c in p.terms.items():
            if not m:
                vec[0] = vec.get(0, 0) + c
            elif len(m) == 1 and m[0][1] == 1 and m[0][0].name in idx:
                vec[idx[m[0][0].name]] = c
            else:
                raise CDGAError(f"{text!r} is not a linear combination of basis elements")
        return vec

    def fibration(self):
        from .section import RelativeSullivan
        if self.borel is not None:
            return self.borel_model().fibration
        names = self.symbol_table()
        A, symbols = self.base_algebra()
        fiber = [names[n] for n, _ in self.generators]
        D = {n: parse_expression(t, names) for n, t in self.differentials.items()}
        return RelativeSullivan.from_symbolic(A, symbols, fiber, D,
                                              keep_poly=self.base.kind == "poly")

    def borel_like(self):
        """A BorelModel for documents with a polynomial base (built or declared)."""
        from .equivariant import BorelModel
        if self.borel is not None:
            return self.borel_model()
        if self.base is None or self.base.kind != "poly":
            raise CDGAError("this command needs a polynomial base")
        F = self.fibration()
        return BorelModel("custom", len(self.base.variables), self.base.truncate, F)

    def retraction_values(self):
        from .section import Retraction
        if not self.retraction:
            return None
        F = self.fibration()
        A = F.base
        names = self.symbol_table()
        vals = {}
        idx = {n: i for i, (n, _) in enumerate(self.base.basis)} if A.exponents is None else None
        for v, text in self.retraction.items():
            if idx is None:
                vals[v] = A.element(parse_expression(text, names))
            else:
                vals[v] = self._linear_in_basis(text, idx, names)
        return Retraction(vals)

    def pair(self):
        from .equivariant import EquivariantPairModel
        B = self.borel_like()
        names = self.symbol_table()
        fd = {n: parse_expression(t, names) for n, t in self.fixed_differentials.items()}
        psi = {n: parse_expression(t, names) for n, t in self.psi.items()}
        return EquivariantPairModel(B, self.fixed_generators, fd, psi)

    def fixed_components(self) -> List[FreeCDGA]:
        comps = []
        if self.fixed_generators:
            names = self.symbol_table()
            gens = [names[n] for n, _ in self.fixed_generators]
            fd = {n: parse_expression(t, names) for n, t in self.fixed_differentials.items()}
            comps.append(FreeCDGA(gens, fd))
        comps.extend(FreeCDGA([]) for _ in range(self.fixed_points))
        return comps


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_DECL = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*:\s*(\S+)\s*$")


class _LineParser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.diags: List[Diagnostic] = []
        self.doc = ModelDocument()
        self.pending: List[Tuple[str, str, str, int, int]] = []   # (slot, key, expr, line, col)

    def err(self, line, col, msg, hint=None):
        self.diags.append(Diagnostic("error", line, col, msg, hint))

    def int_at(self, tok: str, line: int, col: int, what: str) -> Optional[int]:
        if re.fullmatch(r"-?\d+", tok):
            return int(tok)
        self.err(line, col, f"expected an integer {what}, got {tok!r}")
        return None

    def declaration(self, text, line, col, what) -> Optional[Tuple[str, int]]:
        m = _DECL.match(text)
        if not m:
            self.err(line, col, f"expected '<name> : <degree>' in {what}")
            return None
        deg = self.int_at(m.group(2), line, col + m.start(2), "degree")
        if deg is None:
            return None
        return m.group(1), deg

    def run(self) -> ModelDocument:
        for ln, raw in enumerate(self.lines, start=1):
            body = raw.split("#", 1)[0].rstrip()
            if not body.strip():
                continue
            indent = len(body) - len(body.lstrip())
            body = body.strip()
            kw, _, rest = body.partition(" ")
            col_rest = indent + len(kw) + 2 + (len(rest) - len(rest.lstrip()))
            rest = rest.strip()
            handler = getattr(self, "k_" + kw, None)
            if handler is None:
                self.err(ln, indent + 1, f"unknown keyword {kw!r}",
                         _closest(kw, [k[2:] for k in dir(self) if k.startswith("k_")]))
                continue
            handler(rest, ln, col_rest)
        self.resolve()
        if self.diags:
            raise ParseError(self.diags)
        return self.doc

    # -- keywords -------------------------------------------------------------------
    def k_gen(self, rest, ln, col):
        d = self.declaration(rest, ln, col, "gen")
        if d:
            self.doc.generators.append(d)

    def k_fixgen(self, rest, ln, col):
        d = self.declaration(rest, ln, col, "fixgen")
        if d:
            self.doc.fixed_generators.append(d)

    def _assignment(self, slot, rest, ln, col):
        name, eq, expr = rest.partition("=")
        name = name.strip()
        if not eq or not NAME_RE.fullmatch(name):
            self.err(ln, col, "expected '<name> = <expression>'")
            return
        ecol = col + rest.index("=") + 1 + (len(expr) - len(expr.lstrip()))
        self.pending.append((slot, name, expr.strip(), ln, ecol))

    def k_d(self, rest, ln, col):
        self._assignment("differentials", rest, ln, col)

    def k_fixd(self, rest, ln, col):
        self._assignment("fixed_differentials", rest, ln, col)

    def k_psi(self, rest, ln, col):
        self._assignment("psi", rest, ln, col)

    def k_retract(self, rest, ln, col):
        self._assignment("retraction", rest, ln, col)

    def k_dbase(self, rest, ln, col):
        self._assignment("base_differential", rest, ln, col)

    def k_mul(self, rest, ln, col):
        lhs, eq, expr = rest.partition("=")
        m = re.fullmatch(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*\*\s*([A-Za-z][A-Za-z0-9_]*)\s*", lhs)
        if not eq or not m:
            self.err(ln, col, "expected 'mul <u>*<v> = <linear combination>'")
            return
        ecol = col + rest.index("=") + 1 + (len(expr) - len(expr.lstrip()))
        self.pending.append(("products", (m.group(1), m.group(2)), expr.strip(), ln, ecol))

    def k_base(self, rest, ln, col):
        if self.doc.base is not None or self.doc.borel is not None:
            self.err(ln, col, "only one base declaration is allowed")
            return
        m = re.fullmatch(r"poly\s+(.+?)\s+truncate\s+(\S+)", rest)
        if not m:
            self.err(ln, col, "expected 'base poly <a:2, ...> truncate <N>'")
            return
        vars_ = []
        for part in m.group(1).split(","):
            d = self.declaration(part, ln, col + 5, "base")
            if d:
                if d[1] <= 0 or d[1] % 2:
                    self.err(ln, col + 5, f"base variable {d[0]} needs an even positive degree")
                vars_.append(d)
        N = self.int_at(m.group(2), ln, col + m.start(2), "truncation")
        self.doc.base = BaseDecl("poly", variables=vars_, truncate=N if N is not None else 0)

    def k_basis(self, rest, ln, col):
        if self.doc.base is not None or self.doc.borel is not None:
            self.err(ln, col, "only one base declaration is allowed")
            return
        basis = []
        for m in re.finditer(r"(\S+?):(\S+)", rest):
            name, deg = m.group(1), m.group(2)
            d = self.int_at(deg, ln, col + m.start(2), "degree")
            if name != "1" and not NAME_RE.fullmatch(name):
                self.err(ln, col + m.start(1), f"bad basis name {name!r}")
            if d is not None:
                basis.append((name, d))
        if not basis or basis[0] != ("1", 0):
            self.err(ln, col, "the basis must start with the unit '1:0'")
        self.doc.base = BaseDecl("table", basis=basis)

    def k_borel(self, rest, ln, col):
        if self.doc.base is not None or self.doc.borel is not None:
            self.err(ln, col, "only one base declaration is allowed")
            return
        parts = rest.split()
        if not parts or parts[0] not in FAMILY_PARAMS:
            self.err(ln, col, f"unknown family; expected one of {sorted(FAMILY_PARAMS)}")
            return
        fam = parts[0]
        params = {}
        for p in parts[1:]:
            k, eq, v = p.partition("=")
            if not eq or k not in FAMILY_PARAMS[fam]:
                self.err(ln, col + rest.index(p), f"bad parameter {p!r} for {fam}",
                         "allowed: " + ", ".join(sorted(FAMILY_PARAMS[fam])))
                continue
            params[k] = v
        if "n" not in params:
            self.err(ln, col, f"{fam} needs n=<dimension>")
        self.doc.borel = BorelDecl(fam, params)

    def k_fixpoints(self, rest, ln, col):
        n = self.int_at(rest, ln, col, "count")
        if n is not None:
            self.doc.fixed_points = n

    def k_run(self, rest, ln, col):
        if not rest:
            self.err(ln, col, "run needs a command")
        self.doc.directives.append(rest)

    # -- second pass ------------------------------------------------------------------
    def resolve(self):
        doc = self.doc
        seen = set()
        for name, _ in (doc.generators + doc.fixed_generators
                        + (doc.base.variables if doc.base else [])
                        + ([b for b in doc.base.basis if b[0] != "1"] if doc.base else [])):
            if name in seen:
                self.err(1, 1, f"name {name!r} declared twice")
            seen.add(name)
        if doc.borel is not None and doc.generators:
            self.err(1, 1, "a borel builder already provides the generators; drop the gen lines")
        if self.diags:
            return
        try:
            names = doc.symbol_table()
        except (ValueError, CDGAError) as e:
            self.err(1, 1, str(e))
            return
        fiber = dict(doc._fiber())
        fixed = dict(doc.fixed_generators)
        for slot, key, expr, ln, col in self.pending:
            try:
                p = parse_expression(expr, names, ln, col)
            except ParseError as e:
                self.diags.extend(e.diagnostics)
                continue
            text = str(p)
            want = (fiber.get(key) if slot == "differentials" else
                    fixed.get(key) if slot == "fixed_differentials" else None)
            if want is not None and p and p.degrees() != {want + 1}:
                self.err(ln, col, f"d({key}) must be homogeneous of degree {want + 1}",
                         f"got degrees {sorted(p.degrees())}")
                continue
            if slot == "differentials":
                if key not in fiber:
                    self.err(ln, col, f"d given for undeclared generator {key!r}")
                elif doc.borel is not None:
                    self.err(ln, col, "the borel builder fixes the differential")
                else:
                    doc.differentials[key] = text
            elif slot == "fixed_differentials":
                if key not in fixed:
                    self.err(ln, col, f"fixd given for undeclared fixed generator {key!r}")
                else:
                    doc.fixed_differentials[key] = text
            elif slot == "psi":
                if key not in fiber:
                    self.err(ln, col, f"psi given for unknown generator {key!r}")
                else:
                    doc.psi[key] = text
            elif slot == "retraction":
                if key not in fiber:
                    self.err(ln, col, f"retract given for unknown generator {key!r}")
                else:
                    doc.retraction[key] = text
            elif slot == "products":
                if doc.base is None or doc.base.kind != "table":
                    self.err(ln, col, "mul needs a 'basis' declaration")
                else:
                    doc.base.products[key] = text
            elif slot == "base_differential":
                if doc.base is None or doc.base.kind != "table":
                    self.err(ln, col, "dbase needs a 'basis' declaration")
                else:
                    doc.base.differential[key] = text
        if not self.diags:
            self.validate()

    def validate(self):
        try:
            if self.doc.is_fibration():
                self.doc.fibration()
            else:
                self.doc.algebra()
            if self.doc.fixed_generators:
                self.doc.fixed_components()
        except (ValueError, CDGAError) as e:
            self.err(1, 1, f"invalid model: {e}")


def parse(text: str) -> ModelDocument:
    return _LineParser(text).run()


def print_document(doc: ModelDocument) -> str:
    """Canonical text; parsing it gives back an equal document."""
    out = []
    if doc.borel is not None:
        ps = " ".join(f"{k}={v}" for k, v in sorted(doc.borel.params.items()))
        out.append(f"borel {doc.borel.family} {ps}".rstrip())
    elif doc.base is not None:
        b = doc.base
        if b.kind == "poly":
            vs = ", ".join(f"{n}:{d}" for n, d in b.variables)
            out.append(f"base poly {vs} truncate {b.truncate}")
        else:
            out.append("basis " + " ".join(f"{n}:{d}" for n, d in b.basis))
            for (u, v), t in b.products.items():
                out.append(f"mul {u}*{v} = {t}")
            for u, t in b.differential.items():
                out.append(f"dbase {u} = {t}")
    for n, d in doc.generators:
        out.append(f"gen {n} : {d}")
    for n, t in doc.differentials.items():
        out.append(f"d {n} = {t}")
    for n, t in doc.retraction.items():
        out.append(f"retract {n} = {t}")
    for n, d in doc.fixed_generators:
        out.append(f"fixgen {n} : {d}")
    for n, t in doc.fixed_differentials.items():
        out.append(f"fixd {n} = {t}")
    if doc.fixed_points:
        out.append(f"fixpoints {doc.fixed_points}")
    for n, t in doc.psi.items():
        out.append(f"psi {n} = {t}")
    for r in doc.directives:
        out.append(f"run {r}")
    return "\n".join(out) + "\n"
