"""Small exact integer linear algebra: column echelon form, solving, kernels."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def col_echelon(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Column echelon form ``H = A V`` with ``V`` unimodular.

    Returns ``(H, V, rank)``.  The first ``rank`` columns of ``H`` are nonzero,
    each has a positive pivot in a strictly increasing row, and the remaining
    columns are zero (so the tail of ``V`` spans the integer kernel).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(map(int, row)) for row in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i: int, j: int, a: int, b: int, c: int, e: int) -> None:
        # (col_i, col_j) <- (a*col_i + b*col_j, c*col_i + e*col_j)
        for M in (H, V):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + e * y

    k = 0
    for r in range(m):
        if k >= n:
            break
        for c in range(k + 1, n):
            if H[r][c] == 0:
                continue
            a, b = H[r][k], H[r][c]
            g, s, t = _xgcd(a, b)
            colop(k, c, s, t, -b // g, a // g)
        if H[r][k] == 0:
            continue
        if H[r][k] < 0:
            for M in (H, V):
                for row in M:
                    row[k] = -row[k]
        # reduce earlier pivot columns is not needed for our uses
        k += 1
    return H, V, k


def solve_int(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[list[int]]:
    """Some integer ``x`` with ``A x = b``, or ``None`` when none exists."""
    m = len(A)
    H, V, rank = col_echelon(A)
    n = len(V)
    y = [0] * n
    resid = list(map(int, b))
    k = 0
    for r in range(m):
        if k < rank and H[r][k] != 0 and all(H[r][j] == 0 for j in range(k + 1, rank)):
            piv = H[r][k]
            if resid[r] % piv:
                return None
            q = resid[r] // piv
            y[k] = q
            for i in range(m):
                resid[i] -= q * H[i][k]
            k += 1
        elif resid[r] != 0:
            return None
    if any(resid):
        return None
    return [sum(V[i][j] * y[j] for j in range(n)) for i in range(n)]


def kernel_int(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """A Z-basis of ``{x in Z^n : A x = 0}`` as a list of vectors."""
    H, V, rank = col_echelon(A)
    n = len(V)
    return [[V[i][j] for i in range(n)] for j in range(rank, n)]


def lattice_index(cols: Sequence[Sequence[int]], dim: int) -> int:
    """Index in ``Z^dim`` of the lattice spanned by ``cols`` (0 if not full rank)."""
    if not cols:
        return 0 if dim else 1
    A = [[c[i] for c in cols] for i in range(dim)]
    H, _, rank = col_echelon(A)
    if rank < dim:
        return 0
    out = 1
    for k in range(dim):
        out *= H[k][k]
    return abs(out)


def frac_det(M: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def frac_inv(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]
