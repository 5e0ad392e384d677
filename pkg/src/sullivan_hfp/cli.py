"""Command line front end: ``sullivan-hfp COMMAND [options] [FILE]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .catalog import identify_catalog
from .cdga import CDGAError, FreeCDGA, cohomology
from .dsl import Diagnostic, ModelDocument, ParseError, parse
from .ellipticity import certify_component_elliptic, find_witnesses
from .equivariant import (Preconditions, indecomposable_homology, indecomposables, is_T_minimal,
                          k_model, localize_check, never_equivalence_check, pi_k_injective_check)
from .polynomial import Polynomial
from .section import (NonTriangular, RetractionError, SectionModel, component_model,
                      eliminate_contractibles, enumerate_retractions)

SCHEMA = "sullivan-hfp/1"
INCONCLUSIVE = {"Inconclusive", "Undetermined", "Unknown", "Mismatch"}


class UsageError(Exception):
    pass


# -- structured helpers -----------------------------------------------------------

def _q(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_data(p: Polynomial) -> list:
    return [[_q(c), [[g.name, e] for g, e in m]] for m, c in p.sorted_terms()]


def algebra_data(A: FreeCDGA) -> dict:
    return {
        "generators": [[g.name, g.degree] for g in A.generators],
        "differential": {g.name: poly_data(A.d[g.name]) for g in A.generators if A.d[g.name]},
    }


def _indent(text: str, pad: str = "  ") -> str:
    return "\n".join(pad + line if line else line for line in text.splitlines())


# -- analysis shared by several commands ----------------------------------------------

def component_summaries(F, pointed: bool = False, phis=None) -> List[dict]:
    """Retractions, component models, reduced models and their identifications."""
    S = SectionModel(F, pointed=pointed)
    if phis is None:
        phis = enumerate_retractions(F)
    out = []
    for phi in phis:
        C = component_model(S, phi)
        reduced = eliminate_contractibles(C.algebra)
        out.append({"retraction": phi, "component": C, "reduced": reduced,
                    "identification": identify_catalog(reduced)})
    return out


# -- commands -------------------------------------------------------------------------
# each returns (text, data, verdicts)

def cmd_section_model(doc: ModelDocument, args):
    F = _need_fibration(doc, "section-model")
    S = SectionModel(F, pointed=args.pointed)
    A = S.algebra
    return A.describe(), algebra_data(A), []


def cmd_components(doc, args):
    F = _need_fibration(doc, "components")
    phis = [doc.retraction_values()] if doc.retraction else None
    rows = component_summaries(F, pointed=args.pointed, phis=phis)
    lines = [f"components: {len(rows)}"]
    data = []
    for i, r in enumerate(rows, start=1):
        phi, ident = r["retraction"], r["identification"]
        lines.append(f"component {i}: {phi.describe(F.base)}")
        lines.append(f"  type: {ident}")
        lines.append(_indent(r["reduced"].describe(), "  "))
        data.append({
            "retraction": {v: {F.base.labels[k]: _q(c) for k, c in sorted(vec.items())}
                           for v, vec in phi.values.items()},
            "model": algebra_data(r["component"].algebra),
            "reduced": algebra_data(r["reduced"]),
            "type": str(ident),
        })
    verdicts = ["Unknown" for r in rows if not r["identification"].known]
    return "\n".join(lines), {"count": len(rows), "components": data}, verdicts


def cmd_cohomology(doc, args):
    A = doc.algebra()
    groups = cohomology(A, args.max_degree)
    lines, data = [], []
    for g in groups:
        if g.dim:
            reps = ", ".join(str(r) for r in g.representatives)
            lines.append(f"H^{g.degree}: dim {g.dim}  [{reps}]")
            data.append({"degree": g.degree, "dim": g.dim,
                         "representatives": [poly_data(r) for r in g.representatives]})
    return "\n".join(lines), {"groups": data}, []


def _witness_lines(report):
    lines = [f"verdict: {report.verdict}"]
    for w in report.witnesses:
        lines.append(f"  {w.generator}^{w.exponent} = d({w.psi}) + ({-w.theta})"
                     if w.theta else f"  {w.generator}^{w.exponent} = d({w.psi})")
    if report.failed:
        lines.append("  no witness for: " + ", ".join(report.failed))
    return lines


def _witness_data(report):
    return {
        "verdict": report.verdict,
        "order": report.order,
        "witnesses": [{"generator": w.generator, "exponent": w.exponent,
                       "psi": poly_data(w.psi), "theta": poly_data(w.theta)}
                      for w in report.witnesses],
        "failed": report.failed,
    }


def cmd_elliptic(doc, args):
    A = doc.algebra()
    report = find_witnesses(A, n_cap=args.ncap, pure=args.pure)
    return "\n".join(_witness_lines(report)), _witness_data(report), [report.verdict]


def cmd_certify_elliptic(doc, args):
    F = _need_fibration(doc, "certify-elliptic")
    rows = component_summaries(F)
    lines, data, verdicts = [], [], []
    for i, r in enumerate(rows, start=1):
        cert = certify_component_elliptic(r["component"], n_cap=args.ncap)
        direct = find_witnesses(r["component"].algebra, n_cap=args.ncap)
        agree = cert.verdict == direct.verdict
        verdict = cert.verdict if agree else "Inconclusive"
        verdicts.append(verdict)
        lines.append(f"component {i}: {verdict} (lifted: {cert.verdict}, direct: {direct.verdict})")
        for l in cert.lifts:
            lines.append(f"  {l.target}^{l.exponent} = d({l.eta}) + ({-l.remainder})")
        data.append({
            "verdict": verdict, "lifted": cert.verdict, "direct": direct.verdict,
            "shifted": cert.shifted,
            "lifts": [{"target": l.target, "exponent": l.exponent, "eta": poly_data(l.eta),
                       "remainder": poly_data(l.remainder), "preceding": sorted(l.preceding),
                       "certified": l.certified} for l in cert.lifts],
        })
    return "\n".join(lines), {"components": data}, verdicts


def cmd_k_model(doc, args):
    if not doc.fixed_generators:
        raise UsageError("k-model needs fixgen/psi declarations")
    P = doc.pair()
    K = k_model(P)
    onto = K.maps_onto()
    inj = pi_k_injective_check(K)
    lines = [f"{', '.join(srcs) or '(nothing)'} -> {z}" for z, srcs in onto.items()]
    lines.append(f"pi_*(k): {inj.verdict}")
    data = {"linear": {g.name: {z: _q(c) for z, c in K.linear_image(g.name).items()}
                       for g in K.source.generators if K.linear_image(g.name)},
            "injectivity": inj.verdict}
    verdicts = [inj.verdict]
    try:
        ne = never_equivalence_check(P, K)
    except Preconditions as e:
        lines.append(f"equivalence check skipped: {e}")
        data["equivalence"] = {"verdict": "NotApplicable", "reason": str(e)}
    else:
        lines.append(f"k: {ne.verdict} {json.dumps(ne.detail, sort_keys=True)}")
        data["equivalence"] = {"verdict": ne.verdict, "detail": ne.detail}
        verdicts.append(ne.verdict)
    return "\n".join(lines), data, verdicts


def cmd_indecomposables(doc, args):
    B = doc.borel_like()
    I = indecomposables(B)
    even, odd = indecomposable_homology(I)
    lines = []
    for n in I.names:
        col = I.column(n)
        image = " + ".join(f"({p})*{t}" for t, p in col.items()) or "0"
        lines.append(f"D1 {n} = {image}")
    minimal = is_T_minimal(I)
    lines.append(f"minimal: {'yes' if minimal else 'no'}")
    lines.append(f"localized homology: even {even}, odd {odd}")
    data = {"D1": {n: {t: poly_data(p) for t, p in I.column(n).items()} for n in I.names},
            "minimal": minimal, "homology": {"even": even, "odd": odd}}
    return "\n".join(lines), data, []


def cmd_localize_check(doc, args):
    B = doc.borel_like()
    rep = localize_check(B, doc.fixed_components())
    lines = [
        f"indecomposables: rank {rep.homology_rank} (even {rep.indecomposable_homology[0]}, "
        f"odd {rep.indecomposable_homology[1]})",
        f"fixed generators: even {rep.fixed_generators[0]}, odd {rep.fixed_generators[1]}",
    ]
    if rep.cohomology_rank is not None:
        lines.append(f"localized cohomology: rank {rep.cohomology_total} "
                     f"(even {rep.cohomology_rank[0]}, odd {rep.cohomology_rank[1]})")
        lines.append(f"fixed cohomology: even {rep.fixed_cohomology[0]}, odd {rep.fixed_cohomology[1]}")
    lines.append(f"verdict: {rep.verdict}")
    data = {"indecomposable_homology": list(rep.indecomposable_homology),
            "fixed_generators": list(rep.fixed_generators),
            "cohomology_rank": list(rep.cohomology_rank) if rep.cohomology_rank else None,
            "fixed_cohomology": list(rep.fixed_cohomology) if rep.fixed_cohomology else None,
            "verdict": rep.verdict}
    return "\n".join(lines), data, [rep.verdict]


def cmd_identify(doc, args):
    reduced = eliminate_contractibles(doc.algebra())
    ident = identify_catalog(reduced)
    data = {"type": str(ident), "known": ident.known, "reduced": algebra_data(reduced)}
    return str(ident), data, [] if ident.known else ["Unknown"]


COMMANDS = {
    "section-model": cmd_section_model,
    "components": cmd_components,
    "cohomology": cmd_cohomology,
    "elliptic": cmd_elliptic,
    "k-model": cmd_k_model,
    "indecomposables": cmd_indecomposables,
    "localize-check": cmd_localize_check,
    "identify": cmd_identify,
    "certify-elliptic": cmd_certify_elliptic,
}


def _need_fibration(doc, cmd):
    if not doc.is_fibration():
        raise UsageError(f"{cmd} needs a base or borel declaration")
    return doc.fibration()


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sullivan-hfp",
                                description="Sullivan models of section spaces and fixed points.")
    p.add_argument("command", choices=sorted(COMMANDS) + ["run"])
    p.add_argument("file", nargs="?", default="-", help="model document ('-' for stdin)")
    p.add_argument("--format", choices=["text", "structured"],
                   default=os.environ.get("HFP_FORMAT", "text"))
    p.add_argument("--strict", action="store_true", help="exit 2 on inconclusive verdicts")
    p.add_argument("--pointed", action="store_true")
    p.add_argument("--max-degree", type=int, default=12)
    p.add_argument("--ncap", type=int, default=16)
    p.add_argument("--pure", action="store_true", help="search witnesses on the pure part")
    return p


def _emit_diagnostics(diags: List[Diagnostic], path: str, fmt: str, out):
    if fmt == "structured":
        print(json.dumps({"schema": SCHEMA, "diagnostics": [
            {"severity": d.severity, "line": d.line, "col": d.col, "message": d.message,
             "suggestion": d.suggestion} for d in diags]}, indent=2), file=out)
    for d in diags:
        print(f"{path}:{d}", file=sys.stderr)


def run_command(name: str, doc: ModelDocument, args):
    return COMMANDS[name](doc, args)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_intermixed_args(argv)
    if args.format not in ("text", "structured"):
        parser.error("HFP_FORMAT must be 'text' or 'structured'")
    path = args.file
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as e:
        print(f"{path}: {e}", file=sys.stderr)
        return 1
    try:
        doc = parse(text)
    except ParseError as e:
        _emit_diagnostics(e.diagnostics, path, args.format, sys.stdout)
        return 1

    if args.command == "run":
        commands = []
        for directive in doc.directives:
            words = directive.split()
            sub = parser.parse_intermixed_args([words[0], path] + words[1:] +
                                    (["--format", args.format]) + (["--strict"] if args.strict else []))
            commands.append((words[0], sub))
        if not commands:
            print(f"{path}: no run directives", file=sys.stderr)
            return 1
    else:
        commands = [(args.command, args)]

    results, verdicts = [], []
    for name, sub in commands:
        if name == "run":
            print(f"{path}: nested run directive", file=sys.stderr)
            return 1
        try:
            text_out, data, vs = run_command(name, doc, sub)
        except (UsageError, CDGAError, Preconditions, NonTriangular, RetractionError) as e:
            print(f"{path}: {name}: {e}", file=sys.stderr)
            return 1
        results.append((name, text_out, data))
        verdicts.extend(vs)

    if args.format == "structured":
        payload = [{"command": n, "result": d} for n, _, d in results]
        body = {"schema": SCHEMA, "results": payload} if len(payload) > 1 else \
            {"schema": SCHEMA, **payload[0]}
        print(json.dumps(body, indent=2, sort_keys=False))
    else:
        for i, (n, t, _) in enumerate(results):
            if len(results) > 1:
                print(f"== {n}")
            print(t)
    if args.strict and any(v in INCONCLUSIVE for v in verdicts):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
