"""Recompute the claims attached to the shipped example lattices.

Every claim gets a verdict (confirmed, refuted or not-applicable) and a
witness.  Nothing is repaired: a vector that is supposed to be isotropic but is
not is reported as such, with the computed norm.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

from . import fmatrix as fm
from .bridge import BridgeError, image_type, ortho_classify
from .cusps import (
    CuspError,
    SubgroupSpec,
    classify,
    in_group,
    is_primitive_isotropic,
    q_group,
    transvection,
)
from .intlin import frac_det
from .lattice import (
    HermitianLattice,
    LatticeError,
    discriminant_group,
    in_dual,
    ldl_signature,
    orth_complement,
    trace_gram,
    validate,
)
from .qf import CLASS_NUMBER_ONE, FieldElem, canonical_associate, format_elem, is_d1, parse_elem, sqrt_d

CONFIRMED, REFUTED, NA = "confirmed", "refuted", "not-applicable"


@dataclass
class Claim:
    claim: str
    computed: object
    verdict: str
    witness: object = None
    reading: Optional[str] = None

    def to_json(self) -> dict:
        out = {"claim": self.claim, "computed": self.computed, "verdict": self.verdict, "witness": self.witness}
        if self.reading:
            out["reading"] = self.reading
        return out


@dataclass
class AuditReport:
    case: str
    inputs: dict
    claims: list[Claim] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"case": self.case, "inputs": self.inputs, "claims": [c.to_json() for c in self.claims]}

    def verdicts(self) -> Counter:
        return Counter(c.verdict for c in self.claims)


@lru_cache(maxsize=None)
def example_data() -> dict:
    return json.loads(resources.files("hermcusp").joinpath("data/examples.json").read_text())


def _vtext(v) -> list[str]:
    return [format_elem(x) for x in v]


def _verdict(ok: bool) -> str:
    return CONFIRMED if ok else REFUTED


def _membership_witness(M, L, spec) -> dict:
    mem = in_group(M, L, spec)
    out = mem.to_json()
    if mem.ok:
        # a member is witnessed by the images of the fixed classes
        out["class_images"] = [_vtext(fm.mat_vec(M, x)) for x in spec.classes]
    return out


# ---------------------------------------------------------------- case setup


@dataclass
class _Case:
    id: str
    L: HermitianLattice
    names: dict
    ell_terms: list
    fixed: tuple
    fixed_text: str
    claims: list
    params: dict


def _general_cases(raw: dict) -> list[_Case]:
    out = []
    for d in CLASS_NUMBER_ONE:
        if d == -1:
            continue
        eta = sqrt_d(d)
        L = validate(d, [[FieldElem(0, 0, d), eta], [eta.conj(), FieldElem(0, 0, d)]])
        c = eta * eta if is_d1(d) else 2 * eta * eta
        v = L.basis_vector(0)
        fixed = tuple(x / c for x in v)
        names = {"v": v, "w": L.basis_vector(1)}
        claims = [dict(cl) for cl in raw["claims"]]
        for cl in claims:
            if cl.get("lambda") == "-1/d":
                cl["lambda"] = str(Fraction(-1, d))
        out.append(_Case(f"{raw['id']}-d{d}", L, names, raw["ell"], fixed, f"v/({format_elem(c)})", claims, {"d": d}))
    return out


def _cases() -> list[_Case]:
    out = []
    for raw in example_data()["cases"]:
        if raw.get("template") == "general":
            out.extend(_general_cases(raw))
            continue
        d = raw["d"]
        L = validate(d, [[parse_elem(x, d) for x in row] for row in raw["gram"]])
        names = {n: L.basis_vector(i) for i, n in enumerate(raw["basis"])}
        c = parse_elem(raw["fixed"]["divisor"], d)
        fixed = tuple(x / c for x in names[raw["fixed"]["vector"]])
        text = f"{raw['fixed']['vector']}/({raw['fixed']['divisor']})"
        out.append(_Case(raw["id"], L, names, raw["ell"], fixed, text, raw["claims"], raw.get("params", {})))
    return out


def _ell(case: _Case, terms: list):
    v = tuple(FieldElem(0, 0, case.L.d) for _ in range(case.L.rank))
    for t in terms:
        v = fm.vec_add(v, case.names[t])
    return v


# ---------------------------------------------------------------- claims


def _shape(L: HermitianLattice) -> Counter:
    return Counter((canonical_associate(p), e) for p, e in discriminant_group(L).primary)


def _claim_signature(L, cl) -> Claim:
    got = list(L.signature)
    return Claim(f"Hermitian signature is {tuple(cl['expect'])}", got, _verdict(got == cl["expect"]), {"signature": got})


def _claim_disc_shape(L, cl) -> Claim:
    want = Counter((canonical_associate(parse_elem(p, L.d)), int(e)) for p, e in cl["expect"])
    A = discriminant_group(L)
    got = _shape(L)
    computed = [[format_elem(p), e] for p, e in A.primary]
    text = " x ".join(f"O/({p})^{e}" for p, e in cl["expect"]) or "trivial"
    return Claim(f"discriminant group is {text}", computed, _verdict(got == want), {"order": A.order, "divisors": [format_elem(c) for c in A.divisors]})


def _claim_class_in_dual(case: _Case) -> Claim:
    ok = in_dual(case.L, case.fixed)
    return Claim(f"{case.fixed_text} lies in the dual lattice", ok, _verdict(ok), {"vector": _vtext(case.fixed)})


def _claim_isotropic(case: _Case, ell) -> Claim:
    n = case.L.form(ell, ell)
    return Claim("l is isotropic", format_elem(n), _verdict(n == 0), {"l": _vtext(ell), "<l,l>": format_elem(n)})


def _claim_scalar(case: _Case, cl, spec) -> Claim:
    z = parse_elem(cl["unit"], case.L.d)
    M = fm.scalar(z, case.L.rank)
    mem = in_group(M, case.L, spec)
    rel = "lies" if cl["member"] else "does not lie"
    return Claim(f"{cl['unit']} * id {rel} in the group", mem.ok, _verdict(mem.ok == cl["member"]), _membership_witness(M, case.L, spec))


def _claim_translation(case: _Case, cl, spec, ell) -> Claim:
    z = parse_elem(cl["unit"], case.L.d)
    lam = Fraction(cl["lambda"])
    M = fm.mat_scale(z, transvection(case.L, ell, lam))
    mem = in_group(M, case.L, spec)
    rel = "lies" if cl["member"] else "does not lie"
    text = f"{cl['unit']} * T(lambda={lam}) along l {rel} in the group"
    return Claim(text, mem.ok, _verdict(mem.ok == cl["member"]), _membership_witness(M, case.L, spec))


def _claim_cusp_type(case: _Case, cl, spec, ell) -> list[Claim]:
    text = f"l spans a cusp of type {cl['expect']}"
    L = case.L
    if not is_primitive_isotropic(L, ell):
        w = {"l": _vtext(ell), "<l,l>": format_elem(L.form(ell, ell))}
        return [Claim(text, None, REFUTED, w)]
    try:
        q = q_group(L, ell, spec)
        t = classify(L, ell, spec, q)
    except CuspError as exc:
        return [Claim(text, None, NA, {"error": str(exc)})]
    w = {
        "g": q.g,
        "g_gamma": q.g_gamma,
        "Q": [[format_elem(x.zeta), x.t, str(x.lam)] for x in q.elements],
        "m": t.m,
    }
    out = [Claim(text, t.name, _verdict(t.name == cl["expect"]), w)]
    try:
        o = ortho_classify(L, ell, spec)
        pred = image_type(t, L.d)
        out.append(
            Claim(
                "trace image is regular exactly when the type lookup says so",
                o.name,
                _verdict(o.regular == pred.regular),
                {"unitary": t.name, "lookup": pred.name, "orthogonal": o.name},
            )
        )
    except (BridgeError, CuspError) as exc:
        out.append(Claim("trace image is regular exactly when the type lookup says so", None, NA, {"error": str(exc)}))
    return out


def _ell_claims(case: _Case, cl, spec, ell, reading) -> list[Claim]:
    if cl["kind"] == "isotropic":
        out = [_claim_isotropic(case, ell)]
    elif cl["kind"] == "translation":
        out = [_claim_translation(case, cl, spec, ell)]
    else:
        out = _claim_cusp_type(case, cl, spec, ell)
    for c in out:
        c.reading = reading
    return out


def audit_case(case: _Case) -> AuditReport:
    L = case.L
    spec = SubgroupSpec.fix([case.fixed])
    undefined = [t for t in case.ell_terms if t not in case.names]
    report = AuditReport(
        case.id,
        {
            "d": L.d,
            "gram": [_vtext(r) for r in L.gram],
            "basis": list(case.names),
            "l": " + ".join(case.ell_terms),
            "fixed_class": case.fixed_text,
            **({"params": case.params} if case.params else {}),
        },
    )
    for cl in case.claims:
        kind = cl["kind"]
        if kind == "signature":
            report.claims.append(_claim_signature(L, cl))
        elif kind == "disc_shape":
            report.claims.append(_claim_disc_shape(L, cl))
        elif kind == "class_in_dual":
            report.claims.append(_claim_class_in_dual(case))
        elif kind == "scalar":
            report.claims.append(_claim_scalar(case, cl, spec))
        elif kind == "index":
            report.claims.append(
                Claim(f"the group contains the discriminant kernel with index {cl['expect']}", None, NA, {"reason": "subgroup indices are not computed"})
            )
        elif kind in ("isotropic", "translation", "cusp_type"):
            if undefined:
                report.claims.append(
                    Claim(f"{kind} claim for l = {' + '.join(case.ell_terms)}", None, NA, {"undefined": undefined})
                )
                kept = [t for t in case.ell_terms if t in case.names]
                reading = f"l = {' + '.join(kept)} (undefined terms dropped)"
                report.claims.extend(_ell_claims(case, cl, spec, _ell(case, kept), reading))
            else:
                report.claims.extend(_ell_claims(case, cl, spec, _ell(case, case.ell_terms), None))
        else:
            raise ValueError(f"unknown claim kind {kind!r}")
    return report


# ---------------------------------------------------------------- unimodular pieces


def _trace_facts(L: HermitianLattice) -> dict:
    G = trace_gram(L)
    pos, neg, _ = ldl_signature(G)
    det = frac_det([[Fraction(x) for x in row] for row in G])
    return {"even": all(G[i][i] % 2 == 0 for i in range(len(G))), "unimodular": abs(det) == 1, "signature": [pos, neg], "det": int(det)}


def _unimodular_claims(L: HermitianLattice, claims: list) -> list[Claim]:
    out = []
    for cl in claims:
        kind = cl["kind"]
        if kind == "signature":
            out.append(_claim_signature(L, cl))
        elif kind == "unimodular":
            A = discriminant_group(L)
            out.append(Claim("the Hermitian lattice is unimodular", A.is_trivial(), _verdict(A.is_trivial() == cl["expect"]), {"disc_order": A.order}))
        elif kind == "trace_form":
            f = _trace_facts(L)
            want = cl["expect"]
            ok = all(f[k] == want[k] for k in want)
            text = f"trace form is even unimodular of signature {tuple(want['signature'])}"
            out.append(Claim(text, f, _verdict(ok), {"trace_gram": trace_gram(L)}))
        elif kind == "trace_diagonal":
            G = trace_gram(L)
            want = cl["expect"]
            diag = [[want[i] if i == j else 0 for j in range(len(want))] for i in range(len(want))]
            out.append(Claim(f"trace form is diag{tuple(want)}", G, _verdict(G == diag), {"trace_gram": G}))
        else:
            raise ValueError(f"unknown claim kind {kind!r}")
    return out


def block_sum(parts: list[HermitianLattice]) -> HermitianLattice:
    d = parts[0].d
    n = sum(p.rank for p in parts)
    H = [[FieldElem(0, 0, d)] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                H[off + i][off + j] = p.gram[i][j]
        off += p.rank
    return validate(d, H)


def audit_unimodular() -> list[AuditReport]:
    reports = []
    lats = {}
    for raw in example_data()["unimodular"]:
        d = raw["d"]
        L = validate(d, [[parse_elem(x, d) for x in row] for row in raw["gram"]])
        lats[raw["id"]] = L
        r = AuditReport(raw["id"], {"d": d, "gram": [_vtext(row) for row in L.gram]})
        r.claims = _unimodular_claims(L, raw["claims"])
        reports.append(r)

    E8 = lats["e8"]
    r = AuditReport("e8-complement-sum", {"d": E8.d, "pieces": ["hyperbolic-plane", "e8", "e8", "complement"]})
    s = next((E8.basis_vector(i) for i in range(E8.rank) if E8.form(E8.basis_vector(i), E8.basis_vector(i)) == -1), None)
    if s is None:
        r.claims.append(Claim("the e8 lattice has a vector of norm -1", None, REFUTED, {"reason": "no basis vector of norm -1"}))
        reports.append(r)
        return reports
    try:
        C = orth_complement(E8, [s])
    except LatticeError as exc:
        r.claims.append(Claim("orthogonal complement of a norm -1 vector", None, NA, {"error": str(exc)}))
        reports.append(r)
        return reports
    span = validate(E8.d, [[E8.form(s, s)]])
    G = trace_gram(span)
    r.claims.append(Claim("trace form of the norm -1 line is diag(-2, -4)", G, _verdict(G == [[-2, 0], [0, -4]]), {"s": _vtext(s)}))
    f = _trace_facts(C)
    r.claims.append(Claim("complement has rank 3", C.rank, _verdict(C.rank == 3), {"s": _vtext(s), "basis_gram": [_vtext(x) for x in C.gram]}))
    r.claims.append(Claim("trace form of the complement has determinant 8", abs(f["det"]), _verdict(abs(f["det"]) == 8), f))
    total = block_sum([lats["hyperbolic-plane"], E8, E8, C])
    sig = list(total.signature)
    r.claims.append(Claim("the sum has Hermitian signature (1, 12)", sig, _verdict(sig == [1, 12]), {"rank": total.rank}))
    tf = _trace_facts(total)
    r.claims.append(Claim("the sum has trace signature (2, 24)", tf["signature"], _verdict(tf["signature"] == [2, 24]), tf))
    reports.append(r)
    return reports


def run_audit() -> list[AuditReport]:
    return [audit_case(c) for c in _cases()] + audit_unimodular()


def audit_to_json(reports: list[AuditReport]) -> dict:
    tally: Counter = Counter()
    for r in reports:
        tally.update(r.verdicts())
    return {"reports": [r.to_json() for r in reports], "summary": dict(sorted(tally.items()))}
