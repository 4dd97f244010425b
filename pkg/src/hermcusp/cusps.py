"""Cusps of a Hermitian lattice: div(I), transvections, the group Q and cusp types."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterator, Optional, Sequence

from . import fmatrix as fm
from .fmatrix import Matrix, Vector
from .intlin import solve_int
from .lattice import HermitianLattice, LatticeError, discriminant_group, in_dual, orth_complement_basis, trace_gram
from .qf import (
    FieldElem,
    canonical_associate,
    format_elem,
    ideal_basis,
    ideal_gcd_many,
    inverse_different,
    is_d1,
    is_integral,
    omega,
    sqrt_d,
    unit_order,
    unit_to_canonical,
    units,
)


class CuspError(ValueError):
    code = "cusp"


class NotPrimitiveIsotropic(CuspError):
    code = "not-primitive-isotropic"


class SpecTooSmall(CuspError):
    code = "spec-too-small"


class UnclassifiablePair(CuspError):
    code = "unclassifiable"


@dataclass(frozen=True)
class SubgroupSpec:
    """``Full``, ``DiscKernel`` or ``FixClasses`` (pointwise on ``classes``)."""

    variant: str
    classes: tuple[Vector, ...] = ()

    def __post_init__(self):
        if self.variant not in ("Full", "DiscKernel", "FixClasses"):
            raise ValueError(f"unknown subgroup variant {self.variant!r}")

    @classmethod
    def full(cls) -> "SubgroupSpec":
        return cls("Full")

    @classmethod
    def disc_kernel(cls) -> "SubgroupSpec":
        return cls("DiscKernel")

    @classmethod
    def fix(cls, vectors: Sequence[Sequence[FieldElem]]) -> "SubgroupSpec":
        return cls("FixClasses", tuple(tuple(v) for v in vectors))


@dataclass(frozen=True)
class CuspData:
    e: Vector
    div: FieldElem
    ab: tuple[int, int]
    s: FieldElem
    g: int
    e_prime: Optional[Vector] = None
    e_prime_isotropic: bool = False


@dataclass(frozen=True)
class Membership:
    ok: bool
    reason: str = ""
    witness: Optional[Vector] = None
    coordinate: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"member": self.ok}
        if not self.ok:
            out["reason"] = self.reason
            if self.witness is not None:
                out["witness"] = [format_elem(x) for x in self.witness]
            if self.coordinate is not None:
                out["coordinate"] = self.coordinate
        return out


@dataclass(frozen=True)
class QElement:
    zeta: FieldElem
    t: int
    lam: Fraction
    matrix: Matrix


@dataclass(frozen=True)
class QGroup:
    g: int
    g_gamma: int
    k_min: int
    elements: tuple[QElement, ...]

    def units(self) -> set[FieldElem]:
        return {q.zeta for q in self.elements}

    def stabiliser_units(self) -> set[FieldElem]:
        return {q.zeta for q in self.elements if q.t == 0}


@dataclass(frozen=True)
class CuspType:
    name: str
    m: int
    C: tuple[FieldElem, ...]
    Z0: tuple[FieldElem, ...]

    @property
    def regular(self) -> bool:
        return self.name.startswith("R")


# ---------------------------------------------------------------- basics


def pairings(L: HermitianLattice, e: Vector) -> list[FieldElem]:
    """``<b_j, e>`` for each basis vector."""
    return list(fm.mat_vec(L.gram, fm.conj_vec(e)))


def is_primitive_isotropic(L: HermitianLattice, e: Sequence) -> bool:
    e = fm.as_vector(e, L.d)
    if not any(e) or not fm.is_integral_vec(e):
        return False
    if L.form(e, e):
        return False
    return ideal_gcd_many(list(e)).norm() == 1


def _ab_from_s(s: FieldElem) -> tuple[int, int]:
    u, v = s.int_coords()
    if is_d1(s.d):
        return u // 2, v // 2
    return u, v


def div_from_ab(a: int, b: int, d: int) -> FieldElem:
    """Inverse of the ``(a, b)`` parametrisation of div."""
    s = FieldElem.from_ring(2 * a, 2 * b, d) if is_d1(d) else FieldElem(a, b, d)
    return s / (2 * sqrt_d(d))


def lambda_denominator(s: FieldElem) -> int:
    u, v = s.int_coords()
    return gcd(u, v)


def _solve_linear(coeffs: Sequence[FieldElem], target: FieldElem) -> Optional[list[FieldElem]]:
    """Integral ``x`` with ``sum x_j c_j = target`` (all arguments integral)."""
    d = target.d
    nz = [(j, c) for j, c in enumerate(coeffs) if c]
    cols = ideal_basis([c for _, c in nz])
    A = [[c[0] for c in cols], [c[1] for c in cols]]
    sol = solve_int(A, list(target.int_coords()))
    if sol is None:
        return None
    x = [FieldElem(0, 0, d)] * len(coeffs)
    for k, (j, _) in enumerate(nz):
        x[j] = FieldElem.from_ring(sol[2 * k], sol[2 * k + 1], d)
    return x


def _ring_box(h: int, d: int) -> Iterator[FieldElem]:
    for u in range(-h, h + 1):
        for v in range(-h, h + 1):
            yield FieldElem.from_ring(u, v, d)


def _isotropic_partner(L: HermitianLattice, e: Vector, ep: Vector):
    """Search ``ep + kappa*k + mu*e`` for an isotropic vector (``kappa`` bounded, ``mu`` solved exactly)."""

    w = omega(L.d)

    def fix_mu(x: Vector):
        # <x + mu e, x + mu e> = <x, x> + Tr(mu <e, x>), linear in the coordinates of mu
        q0 = L.form(x, x)
        if q0 == 0:
            return x
        c = L.form(e, x)
        row = [Fraction(c.trace()), Fraction((w * c).trace()), -Fraction(q0.x)]
        den = lcm(*(r.denominator for r in row))
        a, b, t = (int(r * den) for r in row)
        sol = solve_int([[a, b]], [t])
        if sol is None:
            return None
        mu = FieldElem.from_ring(sol[0], sol[1], L.d)
        return fm.vec_add(x, fm.vec_scale(mu, e))

    hit = fix_mu(ep)
    if hit is not None:
        return hit
    try:
        kern = orth_complement_basis(L, [e])
    except LatticeError:
        kern = []
    for k in kern:
        for kappa in _ring_box(2, L.d):
            if not kappa:
                continue
            hit = fix_mu(fm.vec_add(ep, fm.vec_scale(kappa, k)))
            if hit is not None:
                return hit
    return None


def div_of(L: HermitianLattice, e: Sequence) -> CuspData:
    e = fm.as_vector(e, L.d)
    if not is_primitive_isotropic(L, e):
        raise NotPrimitiveIsotropic(f"{[format_elem(x) for x in e]} is not primitive isotropic")
    p = inverse_different(L.d)
    pr = [c / p for c in pairings(L, e)]
    div = canonical_associate(p * ideal_gcd_many(pr))
    s = 2 * sqrt_d(L.d) * div
    g = lambda_denominator(s)
    x = _solve_linear(pr, div / p)
    ep = iso = None
    if x is not None:
        ep = tuple(x)
        iso_vec = _isotropic_partner(L, e, ep)
        if iso_vec is not None:
            ep, iso = iso_vec, True
        else:
            iso = False
    return CuspData(e, div, _ab_from_s(s), s, g, ep, bool(iso))


# ---------------------------------------------------------------- transvections


def transvection(L: HermitianLattice, e: Sequence, lam) -> Matrix:
    """Matrix of ``z -> z + 2 sqrt(d) lam <z, e> e``."""
    e = fm.as_vector(e, L.d)
    c = 2 * sqrt_d(L.d) * Fraction(lam)
    he = pairings(L, e)
    n = L.rank
    return tuple(
        tuple(FieldElem(int(i == j), 0, L.d) + c * e[i] * he[j] for j in range(n)) for i in range(n)
    )


def _first_nonintegral(v: Vector) -> Optional[int]:
    for i, x in enumerate(v):
        if not is_integral(x):
            return i
    return None


def in_group(M: Matrix, L: HermitianLattice, spec: SubgroupSpec, disc_gens=None) -> Membership:
    n = L.rank
    M = fm.as_matrix(M, L.d)
    for j in range(n):
        col = tuple(M[i][j] for i in range(n))
        i = _first_nonintegral(col)
        if i is not None:
            return Membership(False, "not integral", col, i)
    H = L.gram
    G = fm.mat_mul(fm.mat_mul(fm.transpose(M), H), fm.conj_mat(M))
    if G != H:
        i, j = next((i, j) for i in range(n) for j in range(n) if G[i][j] != H[i][j])
        col = tuple(M[k][i] for k in range(n))
        return Membership(False, f"<M b{i}, M b{j}> = {format_elem(G[i][j])}, expected {format_elem(H[i][j])}", col, j)
    if spec.variant == "Full":
        return Membership(True)
    if spec.variant == "DiscKernel":
        xs = disc_gens if disc_gens is not None else discriminant_group(L).generators
    else:
        xs = spec.classes
    for x in xs:
        x = fm.as_vector(x, L.d)
        diff = fm.vec_sub(fm.mat_vec(M, x), x)
        i = _first_nonintegral(diff)
        if i is not None:
            return Membership(False, "moves a fixed class", diff, i)
    return Membership(True)


# ---------------------------------------------------------------- Q and types


def _check_spec(L: HermitianLattice, spec: SubgroupSpec) -> None:
    for x in spec.classes:
        if not in_dual(L, fm.as_vector(x, L.d)):
            raise CuspError(f"class {[format_elem(y) for y in x]} is not in the dual lattice")


def q_group(L: HermitianLattice, e: Sequence, spec: SubgroupSpec, cusp: Optional[CuspData] = None) -> QGroup:
    _check_spec(L, spec)
    cd = cusp or div_of(L, e)
    g = cd.g
    gens = discriminant_group(L).generators if spec.variant == "DiscKernel" else None

    def member(M):
        return in_group(M, L, spec, gens)

    k_min = next((k for k in range(1, g + 1) if g % k == 0 and member(transvection(L, cd.e, Fraction(k, g)))), None)
    if k_min is None:
        raise SpecTooSmall("integral transvections are not in the group")
    # smallest k overall (not just divisors) must be a divisor of g
    for k in range(1, k_min):
        if member(transvection(L, cd.e, Fraction(k, g))):
            raise AssertionError("translation lattice is not (1/g_gamma)Z")
    elements = []
    for zeta in units(L.d):
        for t in range(k_min):
            lam = Fraction(t, g)
            M = fm.mat_scale(zeta, transvection(L, cd.e, lam))
            if member(M):
                elements.append(QElement(zeta, t, lam, M))
    seen = [q.zeta for q in elements]
    if len(seen) != len(set(seen)):
        raise AssertionError("projection of Q to the units is not injective")
    return QGroup(g, g // k_min, k_min, tuple(elements))


def _mu(k: int, d: int) -> tuple[FieldElem, ...]:
    return tuple(sorted((u for u in units(d) if k % unit_order(u) == 0), key=lambda u: (unit_order(u), u.x, u.y)))


_GENERIC = {(1, 1): "R1", (2, 2): "R2", (2, 1): "I2"}
_GAUSS = {**_GENERIC, (4, 4): "R4", (4, 2): "SI2", (4, 1): "I4"}
_EISEN = {
    **_GENERIC,
    (3, 3): "R3",
    (6, 6): "R6",
    (3, 1): "I3",
    (6, 3): "SI2",
    (6, 2): "SI3",
    (6, 1): "I6",
}


def type_table(d: int) -> dict[tuple[int, int], str]:
    return _GAUSS if d == -1 else _EISEN if d == -3 else _GENERIC


def type_from_units(d: int, C: set, Z0: set) -> CuspType:
    for S in (C, Z0):
        if S != set(_mu(len(S), d)):
            raise UnclassifiablePair(f"{sorted(map(str, S))} is not a subgroup of the units")
    name = type_table(d).get((len(C), len(Z0)))
    if name is None:
        raise UnclassifiablePair(f"(|C|, |Z0|) = ({len(C)}, {len(Z0)}) has no type for d={d}")
    return CuspType(name, len(C) // len(Z0), _mu(len(C), d), _mu(len(Z0), d))


def classify(L: HermitianLattice, e: Sequence, spec: SubgroupSpec, q: Optional[QGroup] = None) -> CuspType:
    q = q or q_group(L, e, spec)
    return type_from_units(L.d, q.units(), q.stabiliser_units())


def enumerate_isotropic(L: HermitianLattice, height: int) -> list[Vector]:
    """Primitive isotropic vectors with ring coordinates in ``[-height, height]``, up to units."""
    # <v, v> is rational, so v is isotropic iff the integer trace form vanishes on its coordinates
    T = trace_gram(L)
    coords = [(u, v) for u in range(-height, height + 1) for v in range(-height, height + 1)]
    elems = [FieldElem.from_ring(u, v, L.d) for u, v in coords]
    seen: set[Vector] = set()
    out = []
    for idx in itertools.product(range(len(coords)), repeat=L.rank):
        c = [x for i in idx for x in coords[i]]
        if not any(c) or sum(c[j] * sum(T[j][k] * c[k] for k in range(len(c)) if c[k]) for j in range(len(c)) if c[j]):
            continue
        v = tuple(elems[i] for i in idx)
        first = next(x for x in v if x)
        u = unit_to_canonical(first)
        w = tuple(u * x for x in v)
        if w in seen:
            continue
        if ideal_gcd_many(list(w)).norm() != 1:
            continue
        seen.add(w)
        out.append(w)
    return out


def qgroup_to_json(q: QGroup) -> dict:
    return {
        "g": q.g,
        "g_gamma": q.g_gamma,
        "elements": [
            {
                "zeta": format_elem(x.zeta),
                "t": x.t,
                "lambda": str(x.lam),
                "matrix": fm.format_matrix(x.matrix),
            }
            for x in q.elements
        ],
    }


def cusp_to_json(cd: CuspData) -> dict:
    out = {
        "cusp": [format_elem(x) for x in cd.e],
        "div": format_elem(cd.div),
        "ab": list(cd.ab),
        "s": format_elem(cd.s),
        "g": cd.g,
    }
    if cd.e_prime is not None:
        out["e_prime"] = [format_elem(x) for x in cd.e_prime]
        out["e_prime_isotropic"] = cd.e_prime_isotropic
    return out


def type_to_json(t: CuspType) -> dict:
    return {
        "type": t.name,
        "m": t.m,
        "C": [format_elem(u) for u in t.C],
        "Z0": [format_elem(u) for u in t.Z0],
    }
