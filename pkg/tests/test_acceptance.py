"""Acceptance criteria 1 to 10, one PASS/FAIL line each."""

import ast
import random
import time
from fractions import Fraction
from pathlib import Path

import conftest
from conftest import all_types, hyperbolic, lat, random_unitary
from cusp_scan import TARGETS, confirm, existence_scan
from decomp_scan import equivalence_run
from hermcusp import fmatrix as fm
from hermcusp.audit import REFUTED, audit_to_json, run_audit
from hermcusp.bridge import embed, image_type, image_type_closed_form, j_matrix, preserves, rat_eye, rat_mul, rat_scale
from hermcusp.cusps import SubgroupSpec, classify, type_from_units
from hermcusp.lattice import discriminant_group, trace_gram
from hermcusp.qf import FieldElem, parse_elem
from hermcusp.slope import Cusp, Ramification, SlopeInput, extends_check, slope_check
from hermcusp.tables import CaseTag, compare, div_candidates, reference_table
from snf_oracle import gauss_family, gauss_family_expected, module_invariants, snf_invariants

SRC = Path(__file__).resolve().parent.parent / "src" / "hermcusp"


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}: {detail}")


# ---------------------------------------------------------------- 1


TABLE_CASES = [(-2, "Idx2"), (-3, "Idx3"), (-3, "Idx6")] + [(d, "Idx2") for d in (-3, -7, -11, -19, -43, -67, -163)]
TABLE_CASES += [(-1, "Idx2"), (-1, "SIdx2"), (-1, "Idx4")]


def test_criterion_1_tables(capsys):
    problems = []
    for d, case in TABLE_CASES:
        tag = CaseTag(d, case)
        start = time.perf_counter()
        got = div_candidates(tag)
        elapsed = time.perf_counter() - start
        want = set(reference_table(tag))
        if got != want:
            diff = compare(tag)
            problems.append(f"d={d} {case}: extra {sorted(diff['extra'])}, missing {sorted(diff['missing'])}")
        if elapsed >= 5:
            problems.append(f"d={d} {case}: {elapsed:.1f}s")
    ok = not problems
    matched = len(TABLE_CASES) - len(problems)
    report(capsys, 1, ok, f"{matched}/{len(TABLE_CASES)} lists match" + ("" if ok else "; " + "; ".join(problems)))
    assert ok, problems


# ---------------------------------------------------------------- 2


def test_criterion_2_discriminant_groups(capsys):
    bad = []
    eta = FieldElem(1, 1, -1)
    for a in (1, 3):
        for b in (0, 1, 2):
            L = gauss_family(a, b)
            A = discriminant_group(L)
            want = sorted([2] * b + [a + 2] * 2)
            got = sorted(e for p, e in A.primary if p == eta)
            if got != want or len(A.primary) != len(want):
                bad.append((a, b, "structure"))
            if snf_invariants(trace_gram(L)) != module_invariants(-1, gauss_family_expected(a, b)):
                bad.append((a, b, "integer SNF"))
    report(capsys, 2, not bad, "6 lattices, structure and integer SNF oracle agree" if not bad else str(bad))
    assert not bad


# ---------------------------------------------------------------- 3


def test_criterion_3_decomp(capsys):
    runs = [equivalence_run(p) for p in (2, 3)]
    ok = all(not r.bad and not r.broken and r.seconds < 60 for r in runs)
    detail = ", ".join(f"p={r.prime}: {r.problems} problems, {len(r.bad)} discrepancies, {r.seconds:.1f}s" for r in runs)
    report(capsys, 3, ok, detail)
    assert ok


# ---------------------------------------------------------------- 4


def test_criterion_4_unit_types(capsys):
    want = {-2: "R2", -7: "R2", -1: "R4", -3: "R6"}
    got = {}
    for d in want:
        L = hyperbolic(d)
        assert discriminant_group(L).is_trivial()
        got[d] = classify(L, L.basis_vector(0), SubgroupSpec.disc_kernel()).name
    ok = got == want
    report(capsys, 4, ok, ", ".join(f"d={d}: {t}" for d, t in sorted(got.items())))
    assert ok


# ---------------------------------------------------------------- 5


BRIDGE_LATTICES = [
    (-1, [["0", "1+sqrt(-1)"], ["1-sqrt(-1)", "0"]]),
    (-1, [["0", "1/2*sqrt(-1)", "0"], ["-1/2*sqrt(-1)", "0", "0"], ["0", "0", "-1"]]),
    (-2, [["0", "sqrt(-2)"], ["-sqrt(-2)", "0"]]),
    (-2, [["0", "-1/4*sqrt(-2)"], ["1/4*sqrt(-2)", "0"]]),
    (-3, [["0", "1/2+1/2*sqrt(-3)", "0"], ["1/2-1/2*sqrt(-3)", "0", "0"], ["0", "0", "-1"]]),
    (-7, [["0", "1"], ["1", "2"]]),
    (-11, [["0", "1"], ["1", "0"]]),
]


def test_criterion_5_bridge(capsys):
    rng = random.Random(20261016)
    lattices = [lat(d, rows) for d, rows in BRIDGE_LATTICES]
    failures = []
    for i in range(100):
        L = lattices[i % len(lattices)]
        M, N = random_unitary(L, rng), random_unitary(L, rng)
        X, Y = embed(M), embed(N)
        G = trace_gram(L)
        if embed(fm.mat_mul(M, N)) != rat_mul(X, Y):
            failures.append((i, "multiplicative"))
        if not (preserves(G, X) and preserves(G, Y)):
            failures.append((i, "trace Gram"))
        J = j_matrix(L.d, L.rank)
        if rat_mul(rat_mul(J, X), J) != rat_scale(L.d, X):
            failures.append((i, "j conjugation"))
    for d in (-1, -2, -3, -7, -11, -19, -43, -67, -163):
        J = j_matrix(d, 2)
        if rat_mul(J, J) != rat_scale(d, rat_eye(4)):
            failures.append((d, "j squared"))
    X = embed(fm.scalar(parse_elem("-1/2+1/2*sqrt(-3)", -3), 2))
    if rat_mul(X, X) != [[-a - b for a, b in zip(r, s)] for r, s in zip(X, rat_eye(4))]:
        failures.append((-3, "cube root"))
    report(capsys, 5, not failures, "100 pairs, j identities, cube root" if not failures else str(failures[:5]))
    assert not failures


# ---------------------------------------------------------------- 6


def test_criterion_6_lookup(capsys):
    types = all_types()
    fields = {d for d, _ in types}
    names = {t.name for _, t in types}
    bad = [(d, t.name) for d, t in types if image_type(t, d) != image_type_closed_form(t)]
    ok = not bad and len(names) == 11 and len(fields) == 3
    report(capsys, 6, ok, f"{len(names)} types over {len(fields)} field classes, {len(types)} pairs" + (f", bad {bad}" if bad else ""))
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_7_existence(capsys):
    lines = []
    ok = True
    for d, groups in TARGETS.items():
        res = existence_scan(d, groups)
        for grp in groups:
            label = "/".join(grp)
            if grp in res.hits:
                hit = res.hits[grp]
                o = confirm(hit)
                t = type_from_units(d, o.C, o.Z0)
                good = t.name == hit.name and o.nonintegral_off_grid
                ok &= good
                gram = [[str(x) for x in r] for r in hit.gram]
                lines.append(f"d={d} {hit.name} at {gram} (oracle {'agrees' if good else 'DISAGREES'})")
            elif res.exhausted:
                lines.append(f"d={d} {label}: none with entry norms <= {res.bound}")
            else:
                ok = False
                lines.append(f"d={d} {label}: no result")
    report(capsys, 7, ok, "; ".join(lines))
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_audit(capsys):
    first = audit_to_json(run_audit())
    second = audit_to_json(run_audit())
    cases = {r["case"]: r for r in first["reports"]}
    constructions = {"gauss-index4-b0", "gauss-index4-b1", "gauss-special2", "eisenstein-index3", "eisenstein-index6"}
    complete = constructions <= set(cases) and any(c.startswith("general-index2") for c in cases)
    unimodular = all(c["verdict"] != REFUTED for cid in ("hyperbolic-plane", "e8") for c in cases[cid]["claims"])
    witnessed = all(c["witness"] for r in first["reports"] for c in r["claims"] if c["verdict"] == REFUTED)
    ok = complete and unimodular and witnessed and first == second
    report(capsys, 8, ok, f"{len(cases)} reports, verdicts {dict(sorted(first['summary'].items()))}, deterministic={first == second}")
    assert ok


# ---------------------------------------------------------------- 9


def _random_input(rng):
    q = lambda lo: Fraction(rng.randint(lo, 240), rng.randint(1, 12))  # noqa: E731
    return SlopeInput(
        n=rng.randint(1, 20),
        k=q(1),
        ramification=tuple(Ramification(rng.randint(2, 6), q(0)) for _ in range(rng.randint(0, 3))),
        cusps=tuple(Cusp(q(0), rng.choice([1, 2, 3, 4, 6])) for _ in range(rng.randint(0, 3))),
        canonical_singularities_asserted=rng.random() < 0.5,
        d=rng.choice([None, -1, -2, -3, -7, -11]),
    )


def _map_orders(inp, f, k=None):
    return SlopeInput(
        inp.n,
        inp.k if k is None else k,
        tuple(Ramification(R.r, f(i, R.v)) for i, R in enumerate(inp.ramification)),
        tuple(Cusp(f(len(inp.ramification) + i, c.v), c.m) for i, c in enumerate(inp.cusps)),
        inp.canonical_singularities_asserted,
        inp.d,
    )


def test_criterion_9_slope(capsys):
    ex1 = slope_check(SlopeInput(13, 13, (), (Cusp(Fraction(1)),), canonical_singularities_asserted=True)).ok
    v2 = slope_check(SlopeInput(13, 14, (), (Cusp(Fraction(2), 6),), canonical_singularities_asserted=True))
    ex2 = not v2.ok and {c["clause"] for c in v2.violations} == {"3"}
    v3 = slope_check(SlopeInput(13, 1, (), (), d=-7))
    ex3 = all(c["holds"] for c in v3.clauses if c["clause"] in ("4", "5"))
    rng = random.Random(9)
    mono = scale = 0
    for _ in range(1000):
        inp = _random_input(rng)
        slots = len(inp.ramification) + len(inp.cusps)
        which, bump = rng.randrange(slots + 1), Fraction(rng.randint(0, 50), rng.randint(1, 6))
        bigger = _map_orders(inp, lambda i, v: v + bump if i == which else v)
        if slope_check(inp).ok and not slope_check(bigger).ok:
            mono += 1
        if extends_check(inp).ok and not extends_check(bigger).ok:
            mono += 1
        c = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        scaled = _map_orders(inp, lambda i, v: c * v, c * inp.k)
        if slope_check(scaled).ok != slope_check(inp).ok or extends_check(scaled).ok != extends_check(inp).ok:
            scale += 1
    ok = ex1 and ex2 and ex3 and mono == 0 and scale == 0
    report(capsys, 9, ok, f"examples {[ex1, ex2, ex3]}, 1000 inputs: {mono} monotonicity and {scale} scaling violations")
    assert ok


# ---------------------------------------------------------------- 10


FLOAT_CALLS = {"float", "sqrt", "log", "exp", "sin", "cos", "pi", "e", "inf", "nan"}


def float_uses(path):
    """Float literals, ``float(...)`` calls and float-valued ``math`` names in a source file."""
    tree = ast.parse(path.read_text())
    out = []
    for node in ast.walk(tree):
        if isinstance(node, ast.Constant) and isinstance(node.value, (float, complex)):
            out.append((path.name, node.lineno, repr(node.value)))
        elif isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "float":
            out.append((path.name, node.lineno, "float()"))
        elif isinstance(node, ast.ImportFrom) and node.module == "math":
            out += [(path.name, node.lineno, a.name) for a in node.names if a.name in FLOAT_CALLS]
        elif isinstance(node, ast.Attribute) and isinstance(node.value, ast.Name) and node.value.id == "math":
            if node.attr in FLOAT_CALLS:
                out.append((path.name, node.lineno, f"math.{node.attr}"))
    return out


def no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(no_floats(k) and no_floats(v) for k, v in obj.items())
    if isinstance(obj, (list, tuple, set, frozenset)):
        return all(no_floats(x) for x in obj)
    if hasattr(obj, "__dataclass_fields__"):
        return all(no_floats(getattr(obj, f)) for f in obj.__dataclass_fields__)
    return True


def test_criterion_10_exact_and_fast(capsys):
    uses = [u for p in sorted(SRC.glob("*.py")) for u in float_uses(p)]
    L = lat(-2, [["0", "sqrt(-2)"], ["-sqrt(-2)", "0"]])
    samples = [discriminant_group(L), classify(L, L.basis_vector(0), SubgroupSpec.disc_kernel()), trace_gram(L), audit_to_json(run_audit())]
    runtime_ok = all(no_floats(s) for s in samples)
    elapsed = time.perf_counter() - conftest.SESSION_START
    ok = not uses and runtime_ok and elapsed < 300
    report(capsys, 10, ok, f"float uses in core: {len(uses)}, session so far {elapsed:.0f}s")
    assert not uses, uses
    assert runtime_ok
    assert elapsed < 300
