"""Hermitian lattices over O_F: validation, duals, discriminant groups, trace forms.

The form is ``<z, w> = z^T H conj(w)``, linear in the first argument, with
``H[j][k] = <b_j, b_k>`` on the standard basis of ``O_F^(n+1)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence, Union

from . import fmatrix as fm
from .fmatrix import Matrix, Vector
from .intlin import frac_det
from .qf import (
    FieldElem,
    bezout,
    canonical_associate,
    check_d,
    divides,
    factor,
    format_elem,
    inverse_different,
    is_integral,
    omega,
    parse_elem,
    residues,
    unit_to_canonical,
)


class LatticeError(ValueError):
    code = "lattice"

    def __init__(self, msg: str, index=None):
        super().__init__(msg)
        self.index = index


class NotHermitian(LatticeError):
    code = "not-hermitian"


class NotIntegral(LatticeError):
    code = "not-integral"


class Degenerate(LatticeError):
    code = "degenerate"


class EmptyComplement(LatticeError):
    code = "empty-complement"


@dataclass(frozen=True)
class HermitianLattice:
    d: int
    gram: Matrix
    signature: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.gram)

    def form(self, z: Sequence[FieldElem], w: Sequence[FieldElem]) -> FieldElem:
        acc = FieldElem(0, 0, self.d)
        for j, zj in enumerate(z):
            if not zj:
                continue
            for k, wk in enumerate(w):
                h = self.gram[j][k]
                if wk and h:
                    acc = acc + zj * h * wk.conj()
        return acc

    def basis_vector(self, i: int) -> Vector:
        return tuple(FieldElem(int(j == i), 0, self.d) for j in range(self.rank))


# ---------------------------------------------------------------- signature


def ldl_signature(G: Sequence[Sequence[Fraction]]) -> tuple[int, int, int]:
    """Inertia ``(pos, neg, zero)`` of a rational symmetric matrix.

    Exact symmetric elimination; a zero diagonal with a nonzero off-diagonal
    entry is handled by a 2x2 hyperbolic block, which contributes (1, 1).
    """
    A = [[Fraction(x) for x in row] for row in G]
    pos = neg = 0
    while A:
        n = len(A)
        k = max(range(n), key=lambda i: abs(A[i][i]))
        if A[k][k] != 0:
            p = A[k][k]
            if p > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in range(n) if i != k]
            A = [[A[i][j] - A[i][k] * A[k][j] / p for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j] != 0), None)
        if pair is None:
            return pos, neg, n
        i0, j0 = pair
        b = A[i0][j0]
        pos += 1
        neg += 1
        rest = [i for i in range(n) if i not in (i0, j0)]
        # inverse of [[0, b], [b, 0]] is [[0, 1/b], [1/b, 0]]
        A = [
            [A[i][j] - (A[i][i0] * A[j0][j] + A[i][j0] * A[i0][j]) / b for j in rest]
            for i in rest
        ]
    return pos, neg, 0


# ---------------------------------------------------------------- trace form


def trace_gram_of(d: int, H: Matrix) -> list[list[int]]:
    """Gram of ``Tr<,>`` on ``{b_1, w b_1, ..., b_n, w b_n}``."""
    w = omega(d)
    one = FieldElem(1, 0, d)
    scal = (one, w)
    n = len(H)
    G: list[list[Fraction]] = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        for k in range(n):
            for a in range(2):
                for b in range(2):
                    G[2 * j + a][2 * k + b] = (scal[a] * scal[b].conj() * H[j][k]).trace()
    for row in G:
        for x in row:
            if x.denominator != 1:
                raise NotIntegral("trace form is not integral")
    return [[int(x) for x in row] for row in G]


def trace_gram(L: HermitianLattice) -> list[list[int]]:
    return trace_gram_of(L.d, L.gram)


# ---------------------------------------------------------------- validation


def validate(d: int, gram: Sequence[Sequence], allow_degenerate: bool = False) -> HermitianLattice:
    check_d(d)
    H = fm.as_matrix(gram, d)
    n = len(H)
    if n == 0 or any(len(row) != n for row in H):
        raise NotHermitian("Gram matrix must be square and nonempty")
    for row in H:
        for x in row:
            if x.d != d:
                raise NotHermitian(f"entry {x} belongs to another field")
    for j in range(n):
        for k in range(j, n):
            if H[k][j] != H[j][k].conj():
                raise NotHermitian(f"H[{k}][{j}] != conj(H[{j}][{k}])", (j, k))
    dinv = 1 / inverse_different(d)
    for j in range(n):
        for k in range(n):
            if not is_integral(H[j][k] * dinv):
                raise NotIntegral(f"H[{j}][{k}] = {H[j][k]} is not in the inverse different", (j, k))
    pos, neg, zero = ldl_signature(trace_gram_of(d, H))
    if zero and not allow_degenerate:
        raise Degenerate("Gram matrix is degenerate (det = 0)")
    return HermitianLattice(d, H, (pos // 2, neg // 2))


# ---------------------------------------------------------------- Smith form over O_F


@dataclass(frozen=True)
class SmithForm:
    U: Matrix
    D: Matrix
    V: Matrix
    diagonal: tuple[FieldElem, ...]


def smith_form(A: Sequence[Sequence[FieldElem]]) -> SmithForm:
    """Smith normal form ``U A V = D`` of an integral matrix over O_F.

    Pivots are chosen by smallest norm and cleared with 2x2 Bezout steps, so
    the ring need not be Euclidean.  Diagonal entries are canonical
    associates forming a divisibility chain.
    """
    M = [list(row) for row in A]
    m = len(M)
    n = len(M[0])
    d = M[0][0].d
    zero, one = FieldElem(0, 0, d), FieldElem(1, 0, d)
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for row in M:
        for x in row:
            if not is_integral(x):
                raise NotIntegral(f"smith_form needs integral entries, got {x}")

    def row_op(i, k, a, b, c, e):
        # (row_i, row_k) <- (a row_i + b row_k, c row_i + e row_k)
        for X in (M, U):
            ri, rk = X[i], X[k]
            X[i] = [a * x + b * y for x, y in zip(ri, rk)]
            X[k] = [c * x + e * y for x, y in zip(ri, rk)]

    def col_op(i, k, a, b, c, e):
        for X in (M, V):
            for row in X:
                x, y = row[i], row[k]
                row[i], row[k] = a * x + b * y, c * x + e * y

    r = min(m, n)
    t = 0
    while t < r:
        cands = [(M[i][j].norm(), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not cands:
            break
        _, pi, pj = min(cands)
        if pi != t:
            M[t], M[pi] = M[pi], M[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for X in (M, V):
                for row in X:
                    row[t], row[pj] = row[pj], row[t]
        while True:
            for i in range(t + 1, m):
                b = M[i][t]
                if b:
                    a = M[t][t]
                    g, s, tt = bezout(a, b)
                    row_op(t, i, s, tt, -b / g, a / g)
            for j in range(t + 1, n):
                b = M[t][j]
                if b:
                    a = M[t][t]
                    g, s, tt = bezout(a, b)
                    col_op(t, j, s, tt, -b / g, a / g)
            if any(M[i][t] for i in range(t + 1, m)):
                continue
            piv = M[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] and not divides(piv, M[i][j])),
                None,
            )
            if bad is None:
                break
            row_op(t, bad, one, one, zero, one)
        t += 1
    diag = []
    for i in range(min(m, n)):
        c = M[i][i]
        if not c:
            break
        u = unit_to_canonical(c)
        M[i] = [u * x for x in M[i]]
        U[i] = [u * x for x in U[i]]
        diag.append(M[i][i])
    tup = lambda X: tuple(tuple(row) for row in X)  # noqa: E731
    return SmithForm(tup(U), tup(M), tup(V), tuple(diag))


# ---------------------------------------------------------------- duals


def dual_matrix(L: HermitianLattice) -> Matrix:
    """``M = H^T / partial``; ``x`` lies in the dual iff ``M x`` is integral."""
    dinv = 1 / inverse_different(L.d)
    return fm.mat_scale(dinv, fm.transpose(L.gram))


def dual_coords(L: HermitianLattice) -> Matrix:
    """Columns form an O_F-basis of the dual lattice in L-coordinates."""
    return fm.inverse(dual_matrix(L))


def in_dual(L: HermitianLattice, x: Vector) -> bool:
    return fm.is_integral_vec(fm.mat_vec(dual_matrix(L), x))


def reduce_mod_lattice(x: Vector) -> Vector:
    """Representative of ``x + O_F^n`` with ring coordinates in [0, 1)."""
    out = []
    for z in x:
        u, v = z.ring_coords()
        out.append(FieldElem.from_ring(u - (u.numerator // u.denominator), v - (v.numerator // v.denominator), z.d))
    return tuple(out)


@dataclass(frozen=True)
class DiscGroup:
    d: int
    divisors: tuple[FieldElem, ...]
    generators: tuple[Vector, ...]
    order: int
    primary: tuple[tuple[FieldElem, int], ...] = field(default=())
    rank: int = 0

    def is_trivial(self) -> bool:
        return not self.divisors


def discriminant_group(L: HermitianLattice) -> DiscGroup:
    M = dual_matrix(L)
    S = smith_form(M)
    n = L.rank
    divisors, gens = [], []
    order = 1
    for i, c in enumerate(S.diagonal):
        order *= int(c.norm())
        if c.norm() == 1:
            continue
        col = tuple(S.V[k][i] / c for k in range(n))
        divisors.append(c)
        gens.append(reduce_mod_lattice(col))
    if len(S.diagonal) < n:
        raise Degenerate("Gram matrix is degenerate")
    primary = []
    for c in divisors:
        primary.extend(factor(c))
    primary.sort(key=lambda pe: (int(pe[0].norm()), pe[0].ring_coords(), pe[1]))
    return DiscGroup(L.d, tuple(divisors), tuple(gens), order, tuple(primary), n)


def disc_elements(A: DiscGroup) -> Iterator[Vector]:
    """Every class of ``A``, reduced modulo the lattice, starting with zero."""
    zero = tuple(FieldElem(0, 0, A.d) for _ in range(A.rank))
    reps = [[tuple(r * x for x in g) for r in residues(c)] for c, g in zip(A.divisors, A.generators)]
    for combo in itertools.product(*reps):
        v = zero
        for part in combo:
            v = fm.vec_add(v, part)
        yield reduce_mod_lattice(v)


def det_order(L: HermitianLattice) -> int:
    """``|N(det(H^T / partial))|``, the expected order of the discriminant group."""
    return abs(int(fm.det(dual_matrix(L)).norm()))


# ---------------------------------------------------------------- complements


def saturate(vectors: Sequence[Vector], d: int) -> list[Vector]:
    """O_F-basis of ``span_F(vectors) ∩ O_F^n`` for independent vectors."""
    if not vectors:
        return []
    n = len(vectors[0])
    cols = []
    for v in vectors:
        D = fm.denominator(v)
        cols.append(tuple(D * x for x in v))
    B = fm.transpose(tuple(cols))
    S = smith_form(B)
    if len(S.diagonal) < len(cols):
        raise LatticeError("vectors are not independent")
    Uinv = fm.inverse(S.U)
    return [tuple(Uinv[i][j] for i in range(n)) for j in range(len(cols))]


def orth_complement_basis(L: HermitianLattice, S: Sequence[Sequence]) -> list[Vector]:
    vecs = [fm.as_vector(s, L.d) for s in S]
    for s in vecs:
        if not fm.is_integral_vec(s):
            raise NotIntegral(f"vector {[str(x) for x in s]} is not in L")
    rows = tuple(fm.mat_vec(L.gram, fm.conj_vec(s)) for s in vecs)
    ker = fm.kernel(rows, L.rank, L.d) if rows else [L.basis_vector(i) for i in range(L.rank)]
    if not ker:
        raise EmptyComplement("the given vectors span L, so the complement is zero")
    return saturate(ker, L.d)


def orth_complement(L: HermitianLattice, S: Sequence[Sequence]) -> HermitianLattice:
    """The primitive sublattice orthogonal to ``S``, with its induced Gram.

    A degenerate result (for example the complement of an isotropic vector
    inside a hyperbolic plane) is returned rather than rejected.
    """
    basis = orth_complement_basis(L, S)
    gram = [[L.form(x, y) for y in basis] for x in basis]
    return validate(L.d, gram, allow_degenerate=True)


# ---------------------------------------------------------------- I/O


def _parse_entry(x, d: int) -> FieldElem:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise LatticeError(f"entry {x!r} should be [x, y]")
        return FieldElem(Fraction(str(x[0])), Fraction(str(x[1])), d)
    if isinstance(x, int):
        return FieldElem(x, 0, d)
    return parse_elem(str(x), d)


def lattice_from_json(obj: Union[dict, str, Path]) -> HermitianLattice:
    if not isinstance(obj, dict):
        obj = json.loads(Path(obj).read_text())
    try:
        d = int(obj["d"])
        rows = obj["gram"]
    except (KeyError, TypeError, ValueError) as exc:
        raise LatticeError(f"lattice file needs integer 'd' and 'gram': {exc}") from None
    try:
        gram = [[_parse_entry(x, d) for x in row] for row in rows]
    except (ValueError, ZeroDivisionError) as exc:
        raise LatticeError(f"bad Gram entry: {exc}") from None
    return validate(d, gram)


def lattice_to_json(L: HermitianLattice) -> dict:
    return {"d": L.d, "gram": [[[str(x.x), str(x.y)] for x in row] for row in L.gram]}


def vector_from_text(text: str, d: int) -> Vector:
    """Parse a comma separated list of field elements."""
    parts = [p for p in text.split(",")]
    return tuple(parse_elem(p, d) for p in parts)


def vector_to_text(v: Sequence[FieldElem]) -> list[str]:
    return [format_elem(x) for x in v]


def describe(L: HermitianLattice) -> dict:
    A = discriminant_group(L)
    return {
        "d": L.d,
        "rank": L.rank,
        "signature": list(L.signature),
        "disc_order": A.order,
        "disc_divisors": [format_elem(c) for c in A.divisors],
        "disc_primary": [[format_elem(p), e] for p, e in A.primary],
        "disc_generators": [vector_to_text(g) for g in A.generators],
        "trace_signature": list(ldl_signature(trace_gram(L))[:2]),
        "trace_det": int(_int_det(trace_gram(L))),
    }


def _int_det(G: Sequence[Sequence[int]]) -> Fraction:
    return frac_det([[Fraction(x) for x in row] for row in G])


def canonical_vector(v: Vector) -> Vector:
    """Scale ``v`` by a unit so its first nonzero entry is a canonical associate."""
    for x in v:
        if x:
            u = unit_to_canonical(x)
            return tuple(u * y for y in v)
    return v


__all__ = [
    "DiscGroup",
    "Degenerate",
    "EmptyComplement",
    "HermitianLattice",
    "LatticeError",
    "NotHermitian",
    "NotIntegral",
    "SmithForm",
    "canonical_associate",
    "canonical_vector",
    "describe",
    "det_order",
    "disc_elements",
    "discriminant_group",
    "dual_coords",
    "dual_matrix",
    "in_dual",
    "lattice_from_json",
    "lattice_to_json",
    "ldl_signature",
    "orth_complement",
    "orth_complement_basis",
    "reduce_mod_lattice",
    "saturate",
    "smith_form",
    "trace_gram",
    "validate",
]
