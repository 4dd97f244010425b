"""From unitary to orthogonal: the trace lattice, the embedding of matrices and cusp images."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from . import fmatrix as fm
from .cusps import CuspData, CuspType, SpecTooSmall, SubgroupSpec, div_of, in_group, transvection
from .fmatrix import Matrix
from .intlin import frac_det, frac_inv
from .lattice import HermitianLattice, ldl_signature, trace_gram
from .qf import FieldElem, omega, sqrt_d

RatMatrix = list[list[Fraction]]


class BridgeError(ValueError):
    code = "bridge"


class ImprimitiveImage(BridgeError):
    code = "imprimitive-image"


@dataclass(frozen=True)
class OrthoType:
    name: str

    @property
    def regular(self) -> bool:
        return self.name != "I2_O"


@dataclass(frozen=True)
class OrthoCusp:
    basis: tuple[tuple[int, ...], tuple[int, ...]]
    lambda_den: int


@dataclass(frozen=True)
class OrthoQ:
    g: int
    k_min: int
    elements: tuple[tuple[int, int], ...]
    C: tuple[int, ...]
    Z0: tuple[int, ...]


def trace_coords(v: Sequence[FieldElem]) -> list[Fraction]:
    out: list[Fraction] = []
    for z in v:
        u, w = z.ring_coords()
        out.extend([u, w])
    return out


def from_trace_coords(c: Sequence, d: int) -> tuple[FieldElem, ...]:
    return tuple(FieldElem.from_ring(c[2 * i], c[2 * i + 1], d) for i in range(len(c) // 2))


def embed(M: Matrix) -> RatMatrix:
    """Matrix of ``M`` on the Z-basis ``{b_1, w b_1, ..., b_n, w b_n}``."""
    n = len(M)
    d = M[0][0].d
    w = omega(d)
    scal = (FieldElem(1, 0, d), w)
    cols = []
    for k in range(n):
        for a in scal:
            cols.append(trace_coords([a * M[j][k] for j in range(n)]))
    return [[cols[c][r] for c in range(2 * n)] for r in range(2 * n)]


def j_matrix(d: int, n: int) -> RatMatrix:
    """Multiplication by ``sqrt(d)`` on the trace basis."""
    return embed(fm.scalar(sqrt_d(d), n))


def rat_mul(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def rat_eye(n: int) -> RatMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rat_scale(c, A: RatMatrix) -> RatMatrix:
    return [[c * x for x in row] for row in A]


def rat_T(A: RatMatrix) -> RatMatrix:
    return [list(r) for r in zip(*A)]


def preserves(G: Sequence[Sequence[int]], X: RatMatrix) -> bool:
    Gf = [[Fraction(x) for x in row] for row in G]
    return rat_mul(rat_mul(rat_T(X), Gf), X) == Gf


def _is_int_matrix(X) -> bool:
    return all(Fraction(x).denominator == 1 for row in X for x in row)


def ortho_cusp(L: HermitianLattice, e: Sequence) -> OrthoCusp:
    """Rank-2 isotropic image spanned by ``e`` and ``omega * e``."""
    e = fm.as_vector(e, L.d)
    cd = div_of(L, e)
    v1 = trace_coords(e)
    v2 = trace_coords([omega(L.d) * x for x in e])
    G = trace_gram(L)
    for x in (v1, v2):
        for y in (v1, v2):
            if sum(x[i] * G[i][j] * y[j] for i in range(len(G)) for j in range(len(G))) != 0:
                raise BridgeError("image is not totally isotropic")
    b1 = tuple(int(x) for x in v1)
    b2 = tuple(int(x) for x in v2)
    minors = 0
    for i in range(len(b1)):
        for j in range(i + 1, len(b1)):
            minors = gcd(minors, b1[i] * b2[j] - b1[j] * b2[i])
    if minors != 1:
        raise ImprimitiveImage(f"image span is not primitive (minor gcd {minors})")
    return OrthoCusp((b1, b2), cd.g)


def dual_generators_q(L: HermitianLattice) -> list[list[Fraction]]:
    """Columns of ``G^-1``: generators of the dual of the trace lattice."""
    G = trace_gram(L)
    Gi = frac_inv([[Fraction(x) for x in row] for row in G])
    return [[Gi[r][c] for r in range(len(G))] for c in range(len(G))]


def in_ortho_group(X: RatMatrix, L: HermitianLattice, spec: SubgroupSpec, gens=None) -> bool:
    """Membership of an integral isometry of the trace lattice in the given group."""
    if not _is_int_matrix(X):
        return False
    G = trace_gram(L)
    if not preserves(G, X):
        return False
    if spec.variant == "Full":
        return True
    if spec.variant == "DiscKernel":
        ys = gens if gens is not None else dual_generators_q(L)
    else:
        ys = [trace_coords(fm.as_vector(x, L.d)) for x in spec.classes]
    for y in ys:
        Xy = [sum((X[i][j] * y[j] for j in range(len(y))), Fraction(0)) for i in range(len(y))]
        if any((a - b).denominator != 1 for a, b in zip(Xy, y)):
            return False
    return True


def ortho_q(L: HermitianLattice, e: Sequence, spec: SubgroupSpec, cusp: Optional[CuspData] = None) -> OrthoQ:
    cd = cusp or div_of(L, e)
    g = cd.g
    gens = dual_generators_q(L) if spec.variant == "DiscKernel" else None

    def E(lam):
        return embed(transvection(L, cd.e, lam))

    k_min = next((k for k in range(1, g + 1) if in_ortho_group(E(Fraction(k, g)), L, spec, gens)), None)
    if k_min is None:
        raise SpecTooSmall("integral translations are not in the orthogonal group")
    elements = []
    for eps in (1, -1):
        for t in range(k_min):
            X = rat_scale(eps, E(Fraction(t, g)))
            if in_ortho_group(X, L, spec, gens):
                elements.append((eps, t))
    C = tuple(sorted({eps for eps, _ in elements}, reverse=True))
    Z0 = tuple(sorted({eps for eps, t in elements if t == 0}, reverse=True))
    return OrthoQ(g, k_min, tuple(elements), C, Z0)


_ORTHO_NAMES = {(1, 1): "R1_O", (2, 2): "R2_O", (2, 1): "I2_O"}


def ortho_classify(L: HermitianLattice, e: Sequence, spec: SubgroupSpec) -> OrthoType:
    q = ortho_q(L, e, spec)
    return OrthoType(_ORTHO_NAMES[(len(q.C), len(q.Z0))])


# type lookup: regular types map to the regular orthogonal type of the same -1 behaviour
_IMAGE_GENERIC = {"R1": "R1_O", "R2": "R2_O", "I2": "I2_O"}
_IMAGE = {
    -1: {**_IMAGE_GENERIC, "R4": "R2_O", "SI2": "R2_O", "I4": "I2_O"},
    -3: {
        **_IMAGE_GENERIC,
        "R3": "R1_O",
        "R6": "R2_O",
        "I3": "R1_O",
        "SI2": "I2_O",
        "SI3": "R2_O",
        "I6": "I2_O",
    },
}


def image_type(t: CuspType, d: int) -> OrthoType:
    table = _IMAGE.get(d, _IMAGE_GENERIC)
    try:
        return OrthoType(table[t.name])
    except KeyError:
        raise BridgeError(f"type {t.name} does not occur for d={d}") from None


def image_type_closed_form(t: CuspType) -> OrthoType:
    """``I2_O`` iff ``-1`` lies in ``C`` but not in ``Z0``."""
    d = t.C[0].d
    minus = FieldElem(-1, 0, d)
    if minus in t.C and minus not in t.Z0:
        return OrthoType("I2_O")
    return OrthoType("R2_O" if minus in t.Z0 else "R1_O")


def trace_summary(L: HermitianLattice) -> dict:
    G = trace_gram(L)
    pos, neg, zero = ldl_signature(G)
    return {
        "signature": [pos, neg],
        "det": int(frac_det([[Fraction(x) for x in row] for row in G])),
        "even": all(G[i][i] % 2 == 0 for i in range(len(G))),
        "rank": len(G),
    }


def kernels_agree(L: HermitianLattice, M: Matrix) -> tuple[bool, bool]:
    """Membership of ``M`` in the unitary and of ``embed(M)`` in the orthogonal discriminant kernel."""
    spec = SubgroupSpec.disc_kernel()
    return bool(in_group(M, L, spec)), in_ortho_group(embed(M), L, spec)


def rat_to_json(A: RatMatrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in A]


__all__ = [
    "BridgeError",
    "ImprimitiveImage",
    "OrthoCusp",
    "OrthoQ",
    "OrthoType",
    "embed",
    "image_type",
    "image_type_closed_form",
    "in_ortho_group",
    "j_matrix",
    "kernels_agree",
    "ortho_classify",
    "ortho_cusp",
    "ortho_q",
    "preserves",
    "rat_mul",
    "trace_coords",
    "trace_summary",
]
