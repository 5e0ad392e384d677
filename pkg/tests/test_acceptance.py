"""End-to-end acceptance checks, one test per criterion."""

import json
import random
import time
from fractions import Fraction

import sympy

from acceptance_log import criterion
from randmodels import corpus
from sullivan_hfp.catalog import Factor
from sullivan_hfp.cdga import DualCoalgebra, FreeCDGA, free_algebra
from sullivan_hfp.cli import component_summaries, main
from sullivan_hfp.ellipticity import (certify_component_elliptic, find_witnesses,
                                      precedence_order, pure_part)
from sullivan_hfp.equivariant import (EquivariantPairModel, build_borel, k_model,
                                      localize_check, never_equivalence_check,
                                      pi_k_injective_check)
from sullivan_hfp.polynomial import Polynomial
from sullivan_hfp.section import SectionModel, component_model, enumerate_retractions


def cli_json(capsys, tmp_path, text, *argv):
    path = tmp_path / "model.hfp"
    path.write_text(text)
    code = main([*argv, str(path), "--format", "structured"])
    out, _ = capsys.readouterr()
    assert code == 0
    return json.loads(out)["result"]


def odd_spheres(upto):
    return [Factor("S", d) for d in range(1, upto + 1, 2)]


def key_of(factors):
    return tuple(sorted((f.canonical().kind, f.canonical().param) for f in factors))


# parameter sets for the projective families, with a note on the roots of
# t^{n+1} + sum_j lam_j t^{n+1-j}
CP_CASES = [
    (1, [0]),           # 0 double
    (1, [1]),           # 0, -1
    (1, [-2]),          # 0, 2
    (2, [0, 0]),        # 0 triple
    (2, [3, 2]),        # 0, -1, -2
    (2, [2, 1]),        # 0, -1 double
    (2, [0, 1]),        # 0 and two irrational roots
    (3, [6, 11, 6]),    # 0, -1, -2, -3
    (3, [4, 5, 2]),     # 0, -1 double, -2
    (3, [3, 3, 1]),     # 0, -1 triple
    (3, [0, 1, 0]),     # 0 triple and two irrational roots
    (3, [0, -1, 0]),    # 0 double, 1, -1
    (3, [0, 0, 1]),     # 0, and the real root of t^3 + 1 which is -1
    (3, [0, 0, 2]),     # 0, and an irrational cube root
]


def criterion_instances():
    """Every Borel fibration used in the first three criteria."""
    out = [build_borel("odd_sphere", n=n) for n in (3, 5, 7)]
    out += [build_borel("even_sphere", n=n, lam=lam) for n in (2, 4) for lam in (0, 1)]
    out += [build_borel("cp_n", n=n, lam=lam) for n, lam in CP_CASES]
    return out


def test_criterion_01_odd_sphere_actions(capsys, tmp_path):
    with criterion(1, "odd-sphere circle actions"):
        for n in (3, 5, 7):
            start = time.perf_counter()
            res = cli_json(capsys, tmp_path, f"borel odd_sphere n={n}\n", "components")
            assert res["count"] == 1
            (comp,) = res["components"]
            assert comp["type"] == " x ".join(f"S^{d}" for d in range(1, n + 1, 2))
            assert sorted(d for _, d in comp["reduced"]["generators"]) == list(range(1, n + 1, 2))
            assert comp["reduced"]["differential"] == {}
            assert time.perf_counter() - start < 5


def grassmannian_data(n):
    evens = [2 * s for s in range(1, n // 2 + 1)]
    odds = [2 * r - 1 for r in range(2, n + 1)]
    return evens, odds


def test_criterion_02_even_sphere_actions(capsys, tmp_path):
    with criterion(2, "even-sphere circle actions"):
        start = time.perf_counter()
        for n in (2, 4):
            res = cli_json(capsys, tmp_path, f"borel even_sphere n={n} lambda=0\n", "components")
            assert res["count"] == 1
            (comp,) = res["components"]
            evens, odds = grassmannian_data(n)
            assert sorted(d for _, d in comp["reduced"]["generators"]) == sorted([1] + evens + odds)
            expected = "S^1 x S^2" if n == 2 else f"S^1 x SO({n + 2})/U({(n + 2) // 2})"
            assert comp["type"] == expected
            for lam in (1, -3):
                res = cli_json(capsys, tmp_path, f"borel even_sphere n={n} lambda={lam}\n",
                               "components")
                assert res["count"] == 2
                want = " x ".join(f"S^{d}" for d in range(n + 1, 2 * n, 2))
                assert [c["type"] for c in res["components"]] == [want, want]
        assert time.perf_counter() - start < 30


def rational_roots(n, lam):
    t = sympy.Symbol("t")
    p = t ** (n + 1) + sum(sympy.Rational(l) * t ** (n + 1 - j) for j, l in enumerate(lam, start=1))
    return {r: m for r, m in sympy.roots(sympy.Poly(p, t), filter="Q").items()}


def allowed_types(n):
    """Products with one odd sphere S^{2i+1} replaced by CP^i (nothing for i = 0)."""
    out = {}
    for i in range(n + 1):
        factors = [f for f in odd_spheres(2 * n + 1) if f.param != 2 * i + 1]
        if i:
            factors.append(Factor("CP", i))
        out[key_of(factors)] = i
    return out


def test_criterion_03_projective_actions():
    with criterion(3, "projective-space circle actions"):
        start = time.perf_counter()
        for n, lam in CP_CASES:
            roots = rational_roots(n, lam)
            rows = component_summaries(build_borel("cp_n", n=n, lam=lam).fibration)
            assert len(rows) == len(roots) <= n + 1
            allowed = allowed_types(n)
            seen = set()
            for r in rows:
                t = r["retraction"].value("x").get(1, Fraction(0))
                assert t in roots
                seen.add(t)
                ident = r["identification"]
                assert ident.known
                # a root of multiplicity m gives CP^{m-1}
                assert allowed[ident.key()] == roots[t] - 1
            assert seen == set(roots)
        assert time.perf_counter() - start < 60


def test_criterion_04_torus_action():
    with criterion(4, "torus action on an odd sphere"):
        B = build_borel("odd_sphere", n=3, torus=2, N=4)
        S = SectionModel(B.fibration)
        A = B.fibration.base
        expected = {(0, 0), (1, 0), (0, 1)}
        for g in S.generators:
            assert not S.differential(g.name)
        (phi,) = enumerate_retractions(B.fibration)
        C = component_model(S, phi)
        got = set()
        for g in C.algebra.generators:
            v, k = S.provenance[g.name]
            assert v == "x" and g.degree == 3 - A.degrees[k] and A.degrees[k] <= 2
            got.add(A.exponents[k])
            assert not C.algebra.d[g.name]
        assert got == expected and len(C.algebra.generators) == 3


def test_criterion_05_components_elliptic():
    with criterion(5, "components of elliptic fibrations are elliptic"):
        count = 0
        for B in criterion_instances():
            S = SectionModel(B.fibration)
            for phi in enumerate_retractions(B.fibration):
                C = component_model(S, phi)
                lifted = certify_component_elliptic(C, n_cap=16)
                direct = find_witnesses(C.algebra, n_cap=16)
                assert lifted.verdict == direct.verdict == "Elliptic"
                count += 1
        assert count == 3 + 2 * (1 + 2) + sum(len(rational_roots(n, l)) for n, l in CP_CASES)


def test_criterion_06_lifted_remainders():
    with criterion(6, "lifted witness remainders"):
        checked = 0
        for lam in ([0, 0], [3, 2], [2, 1], [0, 1]):
            B = build_borel("cp_n", n=2, lam=lam)
            S = SectionModel(B.fibration)
            for phi in enumerate_retractions(B.fibration):
                cert = certify_component_elliptic(component_model(S, phi))
                C = cert.component
                order = precedence_order(C, cert.base.order)
                pure = pure_part(C.algebra)
                evens = {g.name for g in C.algebra.even()}
                assert {l.target for l in cert.lifts} == evens
                for l in cert.lifts:
                    target = Polynomial.gen(next(g for g in C.algebra.generators
                                                 if g.name == l.target))
                    assert pure.apply_d(l.eta) - target ** l.exponent == l.remainder
                    for m in l.remainder.terms:
                        assert any(order.precedes(g.name, l.target) for g, _ in m)
                    checked += 1
        assert checked > 0


def sphere_pair(n, j, exponent):
    B = build_borel("odd_sphere", n=n)
    return EquivariantPairModel(B, [("z", j)], psi={"x": lambda g: g["a"] ** exponent * g["z"]})


def dual_name(e):
    return "x__1" if e == 0 else ("x__a" if e == 1 else f"x__ap{e}")


def test_criterion_07_k_model():
    with criterion(7, "model of k and injectivity"):
        for n in (3, 5):
            for j in (1, 3):
                e = (n - j) // 2
                K = k_model(sphere_pair(n, j, e))
                assert K.maps_onto() == {"z": [dual_name(e)]}
                assert K.linear_image(dual_name(e)) == {"z": 1}
                assert pi_k_injective_check(K).verdict == "Injective"


def test_criterion_08_never_equivalence():
    with criterion(8, "never an equivalence"):
        for n in (3, 5):
            for j, exponent in ((n, 0), (n - 2, 1)):
                P = sphere_pair(n, j, exponent)
                K = k_model(P)
                v = never_equivalence_check(P, K)
                assert v.verdict == "NotEquivalence"
                assert v.detail["degree"] > 0
                assert K.linear_image(v.detail["generator"]) == {}


def test_criterion_09_localization(capsys, tmp_path):
    with criterion(9, "Borel localization"):
        triv = build_borel("even_sphere", n=2, lam=0)
        s2 = free_algebra([("u", 2), ("v", 3)], {"v": lambda g: g["u"] ** 2})
        rep = localize_check(triv, [s2])
        assert rep.cohomology_total == 2
        assert rep.indecomposable_homology == rep.fixed_generators == (1, 1)
        assert rep.verdict == "QuasiIsomorphism"
        rot = build_borel("even_sphere", n=2, lam=1)
        rep = localize_check(rot, [FreeCDGA([]), FreeCDGA([])])
        assert rep.cohomology_rank == rep.fixed_cohomology == (2, 0)
        assert rep.indecomposable_homology == rep.fixed_generators == (0, 0)
        assert rep.verdict == "QuasiIsomorphism"
        res = cli_json(capsys, tmp_path, "borel even_sphere n=2 lambda=1\nfixpoints 2\n",
                       "localize-check")
        assert res["verdict"] == "QuasiIsomorphism"


def random_element(A, degree, rng):
    idx = [k for k in range(A.dim) if A.degrees[k] == degree]
    return {k: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in rng.sample(idx, rng.randint(1, len(idx)))}


def coassociative_and_counital(A):
    C = DualCoalgebra(A)
    for k in range(len(C)):
        left, right = {}, {}
        for (i, j), c in C.delta(k).items():
            for (p, q), c2 in C.delta(i).items():
                left[(p, q, j)] = left.get((p, q, j), 0) + c * c2
            for (p, q), c2 in C.delta(j).items():
                right[(i, p, q)] = right.get((i, p, q), 0) + c * c2
        if {t: c for t, c in left.items() if c} != {t: c for t, c in right.items() if c}:
            return False
        lc, rc = {}, {}
        for (i, j), c in C.delta(k).items():
            if C.counit(i):
                lc[j] = lc.get(j, 0) + c * C.counit(i)
            if C.counit(j):
                rc[i] = rc.get(i, 0) + c * C.counit(j)
        if {t: c for t, c in lc.items() if c} != {k: 1} or {t: c for t, c in rc.items() if c} != {k: 1}:
            return False
    return True


def test_criterion_10_property_suites():
    with criterion(10, "property suites"):
        start = time.perf_counter()
        models = corpus(200, seed=20261016)
        for F in models:
            assert len(F.fiber) <= 4 and max(F.base.degrees) <= 8
            S = SectionModel(F)
            for g in S.generators:
                assert S.algebra.apply_d(S.differential(g.name)) == Polynomial.zero()
            for v in F.fiber:
                for (b, m) in F.D[v.name]:
                    for k in range(F.base.dim):
                        assert S.rho_inverse(b, m, k) == S.rho_inverse(b, m, k, strategy="right")
            assert coassociative_and_counital(F.base)
        rng = random.Random(7)
        for _ in range(1000):
            A = rng.choice(models).base
            degs = sorted(set(A.degrees))
            x, y, z = (random_element(A, rng.choice(degs), rng) for _ in range(3))
            assert A.mul(A.mul(x, y), z) == A.mul(x, A.mul(y, z))
            dx = A.degrees[next(iter(x))]
            dy = A.degrees[next(iter(y))]
            sign = -1 if dx * dy % 2 else 1
            assert A.mul(x, y) == {k: sign * c for k, c in A.mul(y, x).items()}
        assert time.perf_counter() - start < 300
