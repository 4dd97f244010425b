"""Membership checks against the catalogue of candidate discriminant groups.

The catalogue lives in ``data/appendix_a.json``.  A structure is a list of
``(prime, exponent)`` pairs describing ``prod O_F / prime^exponent``.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import Counter
from functools import lru_cache
from importlib import resources
from typing import Sequence, Union

from .qf import FieldElem, are_associate, canonical_associate, parse_elem, sqrt_d
from .tables import UnknownCase, div_from_ab, normalize_case

_MULT_RE = re.compile(r"^([ab])([+-]\d+)?$")


@lru_cache(maxsize=None)
def catalogue() -> dict:
    text = resources.files("hermcusp").joinpath("data/appendix_a.json").read_text()
    return json.loads(text)


def _field(d: int) -> dict:
    try:
        return catalogue()["fields"][str(d)]
    except KeyError:
        raise UnknownCase(f"no catalogue entries for d={d}") from None


def prime_labels(d: int) -> dict[str, FieldElem]:
    return {k: canonical_associate(parse_elem(v, d)) for k, v in _field(d)["primes"].items()}


def label_value(label: str, d: int) -> FieldElem:
    """Evaluate labels such as ``"eta1*eta2/sqrt(d)"`` or ``"2"``."""
    primes = {k: parse_elem(v, d) for k, v in _field(d)["primes"].items()}
    num, _, den = label.partition("/")
    out = FieldElem(1, 0, d)
    for f in num.split("*"):
        out = out * (primes[f] if f in primes else FieldElem(int(f), 0, d))
    if den:
        if den != "sqrt(d)":
            raise ValueError(f"bad label {label!r}")
        out = out / sqrt_d(d)
    return out


def _case_block(d: int, case: str) -> dict:
    case = normalize_case(case)
    for key, block in _field(d)["cases"].items():
        if case in key.split("|"):
            return block
    raise UnknownCase(f"no catalogue entries for d={d}, case {case}")


def div_classes(d: int, case: str) -> list[str]:
    return list(_case_block(d, case))


def div_label(d: int, case: str, div: Union[FieldElem, Sequence[int]]) -> str:
    if not isinstance(div, FieldElem):
        div = div_from_ab(int(div[0]), int(div[1]), d)
    for label in _case_block(d, case):
        if are_associate(label_value(label, d), div):
            return label
    raise UnknownCase(f"div {div} is not a listed class for d={d}, case {case}")


def _mult(expr, a: int, b: int) -> int:
    if isinstance(expr, int):
        return expr
    m = _MULT_RE.match(expr)
    if not m:
        raise ValueError(f"bad multiplicity {expr!r}")
    base = a if m.group(1) == "a" else b
    return base + int(m.group(2) or 0)


def _option_assignments(options: dict) -> list[dict]:
    keys = list(options)
    out = []
    for combo in itertools.product(*(options[k] for k in keys)):
        env = {}
        for k, val in zip(keys, combo):
            names = k.split(",")
            vals = val if len(names) > 1 else [val]
            env.update(zip(names, vals))
        out.append(env)
    return out or [{}]


def _uses(family: dict, sym: str) -> bool:
    return any(isinstance(t[2], str) and t[2].startswith(sym) for t in family["terms"])


def expand_family(family: dict, env: dict, a: int, b: int, primes: dict) -> Counter | None:
    """Structure of one family at given parameters (``None`` if a multiplicity is negative)."""
    out: Counter = Counter()
    for label, exp, mult in family["terms"]:
        e = env[exp] if isinstance(exp, str) else exp
        k = _mult(mult, a, b)
        if k < 0:
            return None
        if e > 0 and k > 0:
            out[(primes[label], e)] += k
    return out


def normalize_structure(structure: Sequence, d: int) -> Counter:
    primes = prime_labels(d)
    out: Counter = Counter()
    for p, e in structure:
        if isinstance(p, str):
            p = primes[p] if p in primes else parse_elem(p, d)
        p = canonical_associate(p)
        if int(e) > 0:
            out[(p, int(e))] += 1
    return out


def appendix_membership(d: int, case: str, div, structure: Sequence) -> bool:
    label = div_label(d, case, div)
    return bool(matching_families(d, case, label, structure))


def matching_families(d: int, case: str, label: str, structure: Sequence) -> list[dict]:
    """All (family index, parameters) that reproduce ``structure``."""
    target = normalize_structure(structure, d)
    primes = prime_labels(d)
    bound = sum(target.values()) + 3
    hits = []
    for idx, fam in enumerate(_case_block(d, case)[label]):
        ar = range(bound) if _uses(fam, "a") else [0]
        br = range(bound) if _uses(fam, "b") else [0]
        for env in _option_assignments(fam["options"]):
            for a in ar:
                for b in br:
                    got = expand_family(fam, env, a, b, primes)
                    if got is not None and got == target:
                        hits.append({"family": idx, "a": a, "b": b, **env})
    return hits
