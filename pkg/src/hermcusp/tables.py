"""Candidate values of div(I) for irregular cusps under the discriminant kernel."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .qf import FieldElem, check_d, divides, elements_of_norm, inverse_different, is_d1, sqrt_d

CASES = ("Idx2", "Idx3", "Idx4", "Idx6", "SIdx2", "SIdx3")


class UnknownCase(ValueError):
    code = "unknown-case"


def cases_for(d: int) -> tuple[str, ...]:
    if d == -1:
        return ("Idx2", "SIdx2", "Idx4")
    if d == -3:
        return ("Idx2", "SIdx2", "Idx3", "SIdx3", "Idx6")
    return ("Idx2",)


def normalize_case(name: str) -> str:
    for c in CASES:
        if c.lower() == name.lower():
            return c
    raise UnknownCase(f"unknown case {name!r}; expected one of {', '.join(CASES)}")


@dataclass(frozen=True)
class CaseTag:
    d: int
    case: str

    def __post_init__(self):
        check_d(self.d)
        object.__setattr__(self, "case", normalize_case(self.case))
        if self.case not in cases_for(self.d):
            raise UnknownCase(f"case {self.case} does not occur for d={self.d}")

    @property
    def test_unit(self) -> FieldElem:
        d = self.d
        if self.case == "Idx2" or (self.case == "SIdx2" and d == -3):
            return FieldElem(2, 0, d)
        if self.case == "SIdx2":
            return FieldElem(1, -1, d)
        if self.case == "Idx4":
            return FieldElem(1, 1, d)
        # primitive cube root of unity
        w3 = FieldElem(-1, 1, d) / 2
        if self.case in ("Idx3", "SIdx3"):
            return 1 - w3
        return 1 + w3


def s_from_ab(a: int, b: int, d: int) -> FieldElem:
    """``s = 2 sqrt(d) div`` for the pair ``(a, b)``."""
    return FieldElem.from_ring(2 * a, 2 * b, d) if is_d1(d) else FieldElem(a, b, d)


def div_from_ab(a: int, b: int, d: int) -> FieldElem:
    return s_from_ab(a, b, d) / (2 * sqrt_d(d))


def ab_from_div(div: FieldElem) -> tuple[int, int]:
    s = 2 * sqrt_d(div.d) * div
    u, v = s.int_coords()
    return (u // 2, v // 2) if is_d1(div.d) else (u, v)


def g_of_ab(a: int, b: int, d: int) -> int:
    u, v = s_from_ab(a, b, d).int_coords()
    return gcd(u, v)


def satisfies(tag: CaseTag, a: int, b: int) -> bool:
    """The two defining predicates, evaluated directly."""
    if (a, b) == (0, 0):
        return False
    div = div_from_ab(a, b, tag.d)
    return divides(div, tag.test_unit) and g_of_ab(a, b, tag.d) > 1


def div_candidates(tag: CaseTag) -> set[tuple[int, int]]:
    """All ``(a, b)`` with ``u/div`` integral and ``g > 1``.

    ``div`` lies in the inverse different, so ``u/div = x`` forces ``x`` to
    divide ``u/partial``; the divisors of that fixed element are finite and are
    found among elements whose norm divides its norm.
    """
    d = tag.d
    u = tag.test_unit
    top = u / inverse_different(d)
    nt = int(top.norm())
    out = set()
    for k in range(1, nt + 1):
        if nt % k:
            continue
        for x in elements_of_norm(k, d):
            if not divides(x, top):
                continue
            div = u / x
            a, b = ab_from_div(div)
            if g_of_ab(a, b, d) > 1:
                out.add((a, b))
    return out


def _pm(*pairs):
    return frozenset(pairs)


_T3_COMMON = _pm((-2, 0), (-2, 4), (-1, 0), (-1, 2), (1, -2), (1, 0), (2, -4), (2, 0))

# Published candidate lists, keyed by (d, case).
REFERENCE_TABLES: dict[tuple[int, str], frozenset] = {
    (-2, "Idx2"): _pm((2, 0), (-2, 0), (4, 0), (-4, 0), (0, 2), (0, -2), (0, 4), (0, -4)),
    (-3, "Idx3"): _pm(
        (-3, 0), (-3, 3), (-2, 1), (-1, -1), (-1, 0), (-1, 1), (-1, 2), (0, -3), (0, -1),
        (0, 1), (0, 3), (1, -2), (1, -1), (1, 0), (1, 1), (2, -1), (3, -3), (3, 0),
    ),
    (-3, "Idx6"): _pm(
        (-2, 1), (-1, -1), (-1, 0), (-1, 1), (-1, 2), (0, -1), (0, 1), (1, -2), (1, -1),
        (1, 0), (1, 1), (2, -1),
    ),
    (-3, "Idx2"): _pm(
        (-4, 2), (-2, -2), (-2, 0), (-2, 1), (-2, 2), (-2, 4), (-1, -1), (-1, 0), (-1, 1),
        (-1, 2), (0, -2), (0, -1), (0, 1), (0, 2), (1, -2), (1, -1), (1, 0), (1, 1),
        (2, -4), (2, -2), (2, -1), (2, 0), (2, 2), (4, -2),
    ),
    (-7, "Idx2"): _pm(
        (-4, 1), (-3, -1), (-2, 0), (-2, 4), (-1, 0), (-1, 1), (-1, 2), (0, -1), (0, 1),
        (1, -2), (1, -1), (1, 0), (2, -4), (2, 0), (3, 1), (4, -1),
    ),
    (-11, "Idx2"): _T3_COMMON,
    (-19, "Idx2"): _T3_COMMON,
    (-43, "Idx2"): _T3_COMMON,
    (-67, "Idx2"): _T3_COMMON,
    (-163, "Idx2"): _T3_COMMON,
    # listed as values of div(I); converted to pairs below
    (-1, "Idx2"): _pm((2, 0), (-2, 0), (0, 2), (0, -2), (2, 2), (2, -2), (-2, 2), (-2, -2), (4, 0), (-4, 0), (0, 4), (0, -4)),
    (-1, "SIdx2"): _pm((2, 2), (2, -2), (-2, 2), (-2, -2)),
    (-1, "Idx4"): _pm((2, 2), (2, -2), (-2, 2), (-2, -2)),
}

# div(I) values as printed for d = -1, used to cross-check the pair lists above
REFERENCE_DIVS_D1 = {
    "Idx2": ["1", "-1", "sqrt(-1)", "-sqrt(-1)", "1+sqrt(-1)", "1-sqrt(-1)", "-1+sqrt(-1)",
             "-1-sqrt(-1)", "2", "-2", "2*sqrt(-1)", "-2*sqrt(-1)"],
    "SIdx2": ["1+sqrt(-1)", "1-sqrt(-1)", "-1+sqrt(-1)", "-1-sqrt(-1)"],
    "Idx4": ["1+sqrt(-1)", "1-sqrt(-1)", "-1+sqrt(-1)", "-1-sqrt(-1)"],
}


def reference_table(tag: CaseTag) -> frozenset:
    try:
        return REFERENCE_TABLES[(tag.d, tag.case)]
    except KeyError:
        raise UnknownCase(f"no published table for d={tag.d}, case {tag.case}") from None


def compare(tag: CaseTag) -> dict:
    got = div_candidates(tag)
    ref = set(reference_table(tag))
    return {
        "match": got == ref,
        "missing": sorted(ref - got),
        "extra": sorted(got - ref),
    }
