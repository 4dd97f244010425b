"""Dense matrices over Q(sqrt d), stored as tuples of tuples of FieldElem."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .qf import FieldElem, is_integral

Matrix = tuple[tuple[FieldElem, ...], ...]
Vector = tuple[FieldElem, ...]


def fe(x, d: int) -> FieldElem:
    return x if isinstance(x, FieldElem) else FieldElem(x, 0, d)


def as_matrix(rows: Sequence[Sequence], d: int) -> Matrix:
    return tuple(tuple(fe(x, d) for x in row) for row in rows)


def as_vector(xs: Sequence, d: int) -> Vector:
    return tuple(fe(x, d) for x in xs)


def zeros(m: int, n: int, d: int) -> Matrix:
    z = FieldElem(0, 0, d)
    return tuple(tuple(z for _ in range(n)) for _ in range(m))


def identity(n: int, d: int) -> Matrix:
    return tuple(tuple(FieldElem(int(i == j), 0, d) for j in range(n)) for i in range(n))


def scalar(c: FieldElem, n: int) -> Matrix:
    z = FieldElem(0, 0, c.d)
    return tuple(tuple(c if i == j else z for j in range(n)) for i in range(n))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def conj_mat(A: Matrix) -> Matrix:
    return tuple(tuple(x.conj() for x in row) for row in A)


def conj_vec(v: Vector) -> Vector:
    return tuple(x.conj() for x in v)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    d = A[0][0].d
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = FieldElem(0, 0, d)
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def mat_vec(A: Matrix, v: Vector) -> Vector:
    d = v[0].d
    out = []
    for row in A:
        acc = FieldElem(0, 0, d)
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return tuple(out)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c: FieldElem, A: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in A)


def vec_add(v: Vector, w: Vector) -> Vector:
    return tuple(a + b for a, b in zip(v, w))


def vec_sub(v: Vector, w: Vector) -> Vector:
    return tuple(a - b for a, b in zip(v, w))


def vec_scale(c: FieldElem, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def is_integral_matrix(A: Matrix) -> bool:
    return all(is_integral(x) for row in A for x in row)


def is_integral_vec(v: Vector) -> bool:
    return all(is_integral(x) for x in v)


def det(A: Matrix) -> FieldElem:
    n = len(A)
    d = A[0][0].d
    M = [list(row) for row in A]
    out = FieldElem(1, 0, d)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return FieldElem(0, 0, d)
        if p != c:
            M[c], M[p] = M[p], M[c]
            out = -out
        piv = M[c][c]
        out = out * piv
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / piv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return out


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    d = A[0][0].d
    one, zero = FieldElem(1, 0, d), FieldElem(0, 0, d)
    M = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix over F")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def kernel(A: Matrix, ncols: int, d: int) -> list[Vector]:
    """Basis of the right kernel ``{x : A x = 0}`` over F."""
    M = [list(row) for row in A]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    zero = FieldElem(0, 0, d)
    basis = []
    for f in free:
        x = [zero] * ncols
        x[f] = FieldElem(1, 0, d)
        for i, pc in enumerate(pivots):
            x[pc] = -M[i][f]
        basis.append(tuple(x))
    return basis


def denominator(v: Sequence[FieldElem]) -> int:
    """Least positive integer ``D`` making ``D*v`` integral."""
    out = 1
    for x in v:
        u, w = x.ring_coords()
        out = lcm(out, u.denominator, w.denominator)
    return out


def format_matrix(A: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in A]


def rational_matrix(A: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in A]
