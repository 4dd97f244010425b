"""Vanishing-order tests for the low slope cusp form criterion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional


class SlopeError(ValueError):
    code = "slope-input"


@dataclass(frozen=True)
class Cusp:
    v: Fraction
    m: int = 1  # 1 means regular

    @property
    def regular(self) -> bool:
        return self.m == 1

    @property
    def kind(self) -> str:
        return "regular" if self.regular else f"irregular({self.m})"


@dataclass(frozen=True)
class Ramification:
    r: int
    v: Fraction


@dataclass(frozen=True)
class SlopeInput:
    n: int
    k: Fraction
    ramification: tuple[Ramification, ...] = ()
    cusps: tuple[Cusp, ...] = ()
    canonical_singularities_asserted: bool = False
    d: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "k", Fraction(self.k))
        if self.n < 1:
            raise SlopeError("n must be at least 1")
        if self.k <= 0:
            raise SlopeError("k must be positive")
        for R in self.ramification:
            if not 2 <= R.r <= 6:
                raise SlopeError(f"ramification index {R.r} outside 2..6")
            if R.v < 0:
                raise SlopeError("vanishing orders must be non-negative")
        for c in self.cusps:
            if c.m not in (1, 2, 3, 4, 6):
                raise SlopeError(f"cusp index {c.m} outside 2,3,4,6")
            if c.v < 0:
                raise SlopeError("vanishing orders must be non-negative")


def geometric_order(v, m: int = 1) -> Fraction:
    """``v`` at a regular cusp, ``v/m`` at an irregular cusp of index ``m``."""
    v = Fraction(v)
    if v < 0:
        raise SlopeError("vanishing order must be non-negative")
    return v / m


@dataclass
class Verdict:
    ok: bool
    clauses: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def violations(self) -> list[dict]:
        return [c for c in self.clauses if not c["holds"]]

    def to_json(self) -> dict:
        return {"ok": self.ok, "clauses": self.clauses, "violations": self.violations, **self.extra}


def _clause(name: str, item: str, lhs: Fraction, rel: str, rhs: Fraction) -> dict:
    holds = lhs > rhs if rel == ">" else lhs >= rhs
    return {"clause": name, "item": item, "lhs": str(lhs), "rel": rel, "rhs": str(rhs), "holds": holds}


def extends_check(inp: SlopeInput, k=None) -> Verdict:
    """Weak inequalities for extension of the k-canonical form over the regular locus."""
    k = inp.k if k is None else Fraction(k)
    out = []
    for i, R in enumerate(inp.ramification):
        out.append(_clause("1", f"R{i}", R.v, ">=", (R.r - 1) * k))
    for i, c in enumerate(inp.cusps):
        if c.regular:
            out.append(_clause("2", f"I{i}", c.v, ">=", k))
        else:
            out.append(_clause("3", f"I{i}", c.v, ">=", c.m * k))
    return Verdict(all(c["holds"] for c in out), out)


def large_n_shortcut(inp: SlopeInput) -> Optional[bool]:
    """``n >= 13`` and ``d < -3`` settle conditions (4) and (5); ``None`` without field data."""
    if inp.d is None:
        return None
    return inp.n >= 13 and inp.d < -3


def slope_check(inp: SlopeInput) -> Verdict:
    n1 = inp.n + 1
    out = []
    for i, R in enumerate(inp.ramification):
        out.append(_clause("1", f"R{i}", R.v / inp.k, ">", Fraction(R.r - 1, n1)))
    for i, c in enumerate(inp.cusps):
        if c.regular:
            out.append(_clause("2", f"I{i}", c.v / inp.k, ">", Fraction(1, n1)))
        else:
            out.append(_clause("3", f"I{i}", c.v / inp.k, ">", Fraction(c.m, n1)))
    bound = max([R.r - 2 for R in inp.ramification] + [c.m - 1 for c in inp.cusps if not c.regular] + [0])
    shortcut = large_n_shortcut(inp)
    c4 = _clause("4", "n", Fraction(inp.n), ">=", Fraction(bound))
    if shortcut:
        c4["holds"] = True
        c4["by"] = "shortcut"
    out.append(c4)
    c5 = inp.canonical_singularities_asserted or bool(shortcut)
    out.append(
        {
            "clause": "5",
            "item": "canonical singularities",
            "holds": c5,
            "by": "shortcut" if shortcut and not inp.canonical_singularities_asserted else ("asserted" if c5 else "unasserted"),
        }
    )
    ok = all(c["holds"] for c in out)
    extra = {"verdict": "GeneralType" if ok else "Inconclusive", "large_n_shortcut": shortcut}
    return Verdict(ok, out, extra)


def _rat(x) -> Fraction:
    if isinstance(x, float):
        raise SlopeError("floating point values are not accepted; use integers or 'p/q' strings")
    return Fraction(x)


def input_from_json(obj: dict) -> SlopeInput:
    try:
        ram = tuple(Ramification(int(r["r"]), _rat(r["v"])) for r in obj.get("ramification", []))
        cusps = []
        for c in obj.get("cusps", []):
            kind = c.get("kind", "regular")
            m = 1 if kind == "regular" else int(c["m"])
            if kind not in ("regular", "irregular"):
                raise SlopeError(f"unknown cusp kind {kind!r}")
            cusps.append(Cusp(_rat(c["v"]), m))
        return SlopeInput(
            n=int(obj["n"]),
            k=_rat(obj["k"]),
            ramification=ram,
            cusps=tuple(cusps),
            canonical_singularities_asserted=bool(obj.get("canonical_singularities_asserted", False)),
            d=obj.get("d"),
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SlopeError):
            raise
        raise SlopeError(f"bad slope input: {exc}") from None
