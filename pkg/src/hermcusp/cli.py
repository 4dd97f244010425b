"""Command line front end.  Reports are JSON on stdout; diagnostics go to stderr.

Exit codes: 0 success, 1 bad input, 2 computation failure, 3 mismatch with the
published tables.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import appendix, audit, bridge, cusps, decomp, lattice, slope, tables
from .qf import FieldError, format_elem

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_MISMATCH = 0, 1, 2, 3

INPUT_ERRORS = (
    lattice.LatticeError,
    FieldError,
    slope.SlopeError,
    decomp.DecompError,
    tables.UnknownCase,
    cusps.CuspError,
    bridge.BridgeError,
    json.JSONDecodeError,
    OSError,
)


class InputError(ValueError):
    code = "input"


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _load_lattice(path: str) -> lattice.HermitianLattice:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    return lattice.lattice_from_json(obj)


def _vector(text: str, L: lattice.HermitianLattice):
    v = lattice.vector_from_text(text, L.d)
    if len(v) != L.rank:
        raise InputError(f"vector has {len(v)} entries, lattice has rank {L.rank}")
    return v


def parse_group(text: str, L: lattice.HermitianLattice) -> cusps.SubgroupSpec:
    """``full``, ``disc`` or ``fix:VEC;VEC`` (each VEC comma separated)."""
    t = text.strip()
    if t.lower() == "full":
        return cusps.SubgroupSpec.full()
    if t.lower() in ("disc", "disckernel"):
        return cusps.SubgroupSpec.disc_kernel()
    if t.lower().startswith("fix:"):
        vecs = [_vector(part, L) for part in t[4:].split(";") if part.strip()]
        if not vecs:
            raise InputError("fix: needs at least one vector")
        return cusps.SubgroupSpec.fix(vecs)
    raise InputError(f"unknown group {text!r}; use full, disc or fix:VEC;VEC")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}") from None


# ---------------------------------------------------------------- commands


def cmd_lattice_info(args) -> int:
    L = _load_lattice(args.file)
    out = lattice.describe(L)
    out["trace"] = bridge.trace_summary(L)
    if args.emit_normalized:
        out["normalized"] = lattice.lattice_to_json(L)
    emit(out)
    return EXIT_OK


def cmd_cusp_classify(args) -> int:
    L = _load_lattice(args.file)
    e = _vector(args.cusp, L)
    spec = parse_group(args.group, L)
    cd = cusps.div_of(L, e)
    q = cusps.q_group(L, e, spec, cd)
    t = cusps.classify(L, e, spec, q)
    emit({**cusps.cusp_to_json(cd), **cusps.qgroup_to_json(q), **cusps.type_to_json(t), "group": args.group})
    return EXIT_OK


def cmd_cusp_enumerate(args) -> int:
    L = _load_lattice(args.file)
    if args.height < 0:
        raise InputError("height must be non-negative")
    found = cusps.enumerate_isotropic(L, args.height)
    emit({"height": args.height, "count": len(found), "vectors": [lattice.vector_to_text(v) for v in found]})
    return EXIT_OK


def cmd_div_candidates(args) -> int:
    tag = tables.CaseTag(args.d, args.case)
    got = tables.div_candidates(tag)
    out = {"d": tag.d, "case": tag.case, "test_unit": format_elem(tag.test_unit), "pairs": [list(p) for p in sorted(got)]}
    code = EXIT_OK
    if args.compare_paper:
        diff = tables.compare(tag)
        out["compare"] = {"match": diff["match"], "missing": [list(p) for p in diff["missing"]], "extra": [list(p) for p in diff["extra"]]}
        if not diff["match"]:
            print(f"mismatch with the published list for d={tag.d}, {tag.case}", file=sys.stderr)
            code = EXIT_MISMATCH
    emit(out)
    return code


def _structure(text: str) -> list[tuple[str, int]]:
    """``"1+sqrt(-1):3,1+sqrt(-1):3"`` -> pairs; empty string means trivial."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        p, _, e = part.rpartition(":")
        if not p:
            raise InputError(f"structure entry {part!r} should be PRIME:EXPONENT")
        try:
            out.append((p, int(e)))
        except ValueError:
            raise InputError(f"bad exponent in {part!r}") from None
    return out


def cmd_appendix(args) -> int:
    ab = _ints(args.div)
    if len(ab) != 2:
        raise InputError(f"--div needs exactly two integers a,b, got {args.div!r}")
    a, b = ab
    structure = _structure(args.structure)
    label = appendix.div_label(args.d, args.case, (a, b))
    hits = appendix.matching_families(args.d, args.case, label, structure)
    emit({"d": args.d, "case": tables.normalize_case(args.case), "div_class": label, "member": bool(hits), "matches": hits})
    return EXIT_OK


def cmd_decomp_enumerate(args) -> int:
    p = decomp.DecompProblem(args.m, tuple(_ints(args.a)))
    sols = decomp.decomp_enumerate(p)
    emit({"m": p.m, "a": list(p.a), "solutions": [decomp.solution_to_json(s) for s in sols]})
    return EXIT_OK


def cmd_decomp_oracle(args) -> int:
    p = decomp.DecompProblem(args.m, tuple(_ints(args.a)))
    got = decomp.decomp_oracle(args.p, p)
    out = {"p": args.p, "m": p.m, "a": list(p.a), "structures": [list(x) for x in got]}
    want = sorted({s.structure for s in decomp.decomp_enumerate(p)})
    out["agrees_with_enumeration"] = [tuple(x) for x in got] == want
    emit(out)
    return EXIT_OK


def cmd_ortho_map(args) -> int:
    L = _load_lattice(args.file)
    e = _vector(args.cusp, L)
    spec = parse_group(args.group, L)
    oc = bridge.ortho_cusp(L, e)
    t = cusps.classify(L, e, spec)
    pred = bridge.image_type(t, L.d)
    o = bridge.ortho_classify(L, e, spec)
    emit(
        {
            "unitary_type": t.name,
            "orthogonal_basis": [list(b) for b in oc.basis],
            "orthogonal_type": o.name,
            "lookup_prediction": pred.name,
            "audit": "consistent" if o.regular == pred.regular else "inconsistent",
            "trace": bridge.trace_summary(L),
        }
    )
    return EXIT_OK


def cmd_slope_check(args) -> int:
    try:
        obj = json.loads(Path(args.file).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.file}: not valid JSON ({exc})") from None
    inp = slope.input_from_json(obj)
    emit({"slope": slope.slope_check(inp).to_json(), "extends": slope.extends_check(inp).to_json()})
    return EXIT_OK


def cmd_audit(args) -> int:
    emit(audit.audit_to_json(audit.run_audit()))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hermcusp", description="Cusps of Hermitian lattices over imaginary quadratic fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_lat = sub.add_parser("lattice", help="lattice invariants").add_subparsers(dest="sub", required=True)
    p = p_lat.add_parser("info", help="signature, discriminant group and trace form")
    p.add_argument("file")
    p.add_argument("--emit-normalized", action="store_true", help="also print the normalized lattice file")
    p.set_defaults(func=cmd_lattice_info)

    p_cusp = sub.add_parser("cusp", help="cusp classification").add_subparsers(dest="sub", required=True)
    p = p_cusp.add_parser("classify", help="div, Q and type of a cusp")
    p.add_argument("file")
    p.add_argument("--cusp", required=True, help="comma separated coordinates, e.g. '1,0'")
    p.add_argument("--group", default="disc", help="full, disc or fix:VEC;VEC (default disc)")
    p.set_defaults(func=cmd_cusp_classify)
    p = p_cusp.add_parser("enumerate", help="primitive isotropic vectors of bounded height")
    p.add_argument("file")
    p.add_argument("--height", type=int, required=True)
    p.set_defaults(func=cmd_cusp_enumerate)

    p_tab = sub.add_parser("tables", help="div(I) candidates and discriminant group lists").add_subparsers(dest="sub", required=True)
    p = p_tab.add_parser("div-candidates")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--case", required=True, help=", ".join(tables.CASES))
    p.add_argument("--compare-paper", action="store_true", help="diff against the published list; exit 3 on mismatch")
    p.set_defaults(func=cmd_div_candidates)
    p = p_tab.add_parser("appendix", help="is a discriminant group shape among the listed families")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--case", required=True)
    p.add_argument("--div", required=True, help="the pair a,b")
    p.add_argument("--structure", default="", help="PRIME:EXP,... e.g. '1+sqrt(-1):3,1+sqrt(-1):3'")
    p.set_defaults(func=cmd_appendix)

    p_dec = sub.add_parser("decomp", help="extensions of finite modules over a PID").add_subparsers(dest="sub", required=True)
    for name, fn in (("enumerate", cmd_decomp_enumerate), ("oracle", cmd_decomp_oracle)):
        p = p_dec.add_parser(name)
        p.add_argument("-m", type=int, required=True)
        p.add_argument("-a", required=True, help="comma separated a_1,...,a_s")
        if name == "oracle":
            p.add_argument("-p", type=int, default=2, choices=(2, 3))
        p.set_defaults(func=fn)

    p_orth = sub.add_parser("ortho", help="image in the orthogonal setting").add_subparsers(dest="sub", required=True)
    p = p_orth.add_parser("map")
    p.add_argument("file")
    p.add_argument("--cusp", required=True)
    p.add_argument("--group", default="disc")
    p.set_defaults(func=cmd_ortho_map)

    p_slope = sub.add_parser("slope", help="vanishing order criteria").add_subparsers(dest="sub", required=True)
    p = p_slope.add_parser("check")
    p.add_argument("file")
    p.set_defaults(func=cmd_slope_check)

    p_audit = sub.add_parser("audit", help="recompute the claims on the shipped examples").add_subparsers(dest="sub", required=True)
    p = p_audit.add_parser("examples")
    p.set_defaults(func=cmd_audit)
    return ap


def _error(kind: str, exc: BaseException, code: int) -> int:
    print(f"hermcusp: {exc}", file=sys.stderr)
    emit({"error": {"kind": kind, "code": getattr(exc, "code", type(exc).__name__), "message": str(exc)}})
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for computation failures here
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (cusps.SpecTooSmall, cusps.UnclassifiablePair) as exc:
        return _error("internal", exc, EXIT_INTERNAL)
    except (InputError, *INPUT_ERRORS) as exc:
        return _error("input", exc, EXIT_INPUT)
    except Exception as exc:  # noqa: BLE001 - anything else is a tool failure
        return _error("internal", exc, EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
