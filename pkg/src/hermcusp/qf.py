"""Exact arithmetic in imaginary quadratic fields Q(sqrt d) of class number one.

Elements are stored as ``x + y*sqrt(d)`` with ``x, y`` reduced fractions.  The
ring of integers has the basis ``{1, omega}`` with ``omega = sqrt(d)`` when
``d = 2, 3 (mod 4)`` and ``omega = (1 + sqrt(d))/2`` when ``d = 1 (mod 4)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Union

from .intlin import col_echelon, solve_int

CLASS_NUMBER_ONE = (-1, -2, -3, -7, -11, -19, -43, -67, -163)

Rational = Union[int, Fraction]


class FieldError(ValueError):
    pass


def check_d(d: int) -> int:
    if d not in CLASS_NUMBER_ONE:
        raise FieldError(f"d={d} is not one of the class-number-one values {CLASS_NUMBER_ONE}")
    return d


def is_d1(d: int) -> bool:
    return d % 4 == 1


@dataclass(frozen=True)
class FieldElem:
    x: Fraction
    y: Fraction
    d: int

    def __init__(self, x: Rational = 0, y: Rational = 0, d: int = -1):
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))
        object.__setattr__(self, "d", d)

    # construction helpers
    @classmethod
    def from_ring(cls, u: Rational, v: Rational, d: int) -> "FieldElem":
        """``u + v*omega``."""
        u, v = Fraction(u), Fraction(v)
        if is_d1(d):
            return cls(u + v / 2, v / 2, d)
        return cls(u, v, d)

    def ring_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates ``(u, v)`` with ``self = u + v*omega``."""
        if is_d1(self.d):
            return self.x - self.y, 2 * self.y
        return self.x, self.y

    def int_coords(self) -> tuple[int, int]:
        u, v = self.ring_coords()
        if u.denominator != 1 or v.denominator != 1:
            raise FieldError(f"{self} is not integral")
        return u.numerator, v.numerator

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.d != self.d:
                raise FieldError(f"mixing fields d={self.d} and d={other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.x, -self.y, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.x - o.x, self.y - o.y, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(
            self.x * o.x + self.d * self.y * o.y,
            self.x * o.y + self.y * o.x,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        c = o.conj()
        return FieldElem(
            (self.x * c.x + self.d * self.y * c.y) / n,
            (self.x * c.y + self.y * c.x) / n,
            self.d,
        )

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return FieldElem(1, 0, self.d) / (self ** (-k))
        out = FieldElem(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.d == other.d and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __bool__(self):
        return self.x != 0 or self.y != 0

    def conj(self) -> "FieldElem":
        return FieldElem(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def is_real(self) -> bool:
        return self.y == 0

    def __str__(self) -> str:
        return format_elem(self)

    def __repr__(self) -> str:
        return f"FieldElem({format_elem(self)})"


def F(x: Rational, y: Rational = 0, d: int = -1) -> FieldElem:
    return FieldElem(x, y, d)


def sqrt_d(d: int) -> FieldElem:
    return FieldElem(0, 1, d)


def omega(d: int) -> FieldElem:
    return FieldElem.from_ring(0, 1, d)


def inverse_different(d: int) -> FieldElem:
    """Generator of the inverse different: 1/sqrt(d) or 1/(2 sqrt(d))."""
    s = sqrt_d(d)
    return 1 / s if is_d1(d) else 1 / (2 * s)


@dataclass(frozen=True)
class RingBasis:
    omega: FieldElem
    partial: FieldElem


@lru_cache(maxsize=None)
def ring_basis(d: int) -> RingBasis:
    check_d(d)
    return RingBasis(omega(d), inverse_different(d))


def is_integral(z: FieldElem) -> bool:
    u, v = z.ring_coords()
    return u.denominator == 1 and v.denominator == 1


@lru_cache(maxsize=None)
def units(d: int) -> tuple[FieldElem, ...]:
    check_d(d)
    one = FieldElem(1, 0, d)
    if d == -1:
        i = sqrt_d(d)
        return (one, -one, i, -i)
    if d == -3:
        w = FieldElem(Fraction(-1, 2), Fraction(1, 2), d)
        return tuple(s * w**k for k in range(3) for s in (one, -one))
    return (one, -one)


def unit_order(u: FieldElem) -> int:
    z = u
    for k in range(1, 7):
        if z == 1:
            return k
        z = z * u
    raise FieldError(f"{u} is not a root of unity")


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def canonical_associate(z: FieldElem) -> FieldElem:
    """Deterministic representative of ``z`` up to units.

    Picks the unit multiple whose ``(sign(u), u, v)`` is lexicographically
    greatest, ``(u, v)`` being the ring coordinates.
    """
    if not z:
        return z

    def key(w):
        u, v = w.ring_coords()
        return (_sign(u), u, v)

    return max((e * z for e in units(z.d)), key=key)


def unit_to_canonical(z: FieldElem) -> FieldElem:
    """The unit ``e`` with ``e*z == canonical_associate(z)``."""
    c = canonical_associate(z)
    for e in units(z.d):
        if e * z == c:
            return e
    raise AssertionError("unreachable")


def divides(a: FieldElem, b: FieldElem) -> bool:
    """True iff ``b/a`` is integral (``a`` nonzero)."""
    return is_integral(b / a)


def are_associate(a: FieldElem, b: FieldElem) -> bool:
    if not a or not b:
        return not a and not b
    q = b / a
    return any(q == e for e in units(a.d))


def elements_of_norm(n: int, d: int) -> Iterator[FieldElem]:
    """All integral elements of norm exactly ``n``.

    Solves ``N(u + v*omega) = n`` by bounding ``|v|`` and then solving the
    quadratic in ``u`` exactly.
    """
    if n < 0:
        return
    if n == 0:
        yield FieldElem(0, 0, d)
        return
    if is_d1(d):
        # N = ((2u+v)^2 - d v^2)/4
        vmax = isqrt(4 * n // (-d))
        for v in range(-vmax, vmax + 1):
            rest = 4 * n + d * v * v
            if rest < 0:
                continue
            r = isqrt(rest)
            if r * r != rest:
                continue
            for t in {r, -r}:
                if (t - v) % 2 == 0:
                    yield FieldElem.from_ring((t - v) // 2, v, d)
    else:
        vmax = isqrt(n // (-d))
        for v in range(-vmax, vmax + 1):
            rest = n + d * v * v
            if rest < 0:
                continue
            r = isqrt(rest)
            if r * r != rest:
                continue
            for u in {r, -r}:
                yield FieldElem.from_ring(u, v, d)


def elements_up_to_norm(bound: int, d: int) -> Iterator[FieldElem]:
    """All integral elements with ``0 < N(z) <= bound``."""
    for n in range(1, bound + 1):
        yield from elements_of_norm(n, d)


def _mul_matrix(z: FieldElem) -> list[list[int]]:
    """Integer matrix of multiplication by integral ``z`` on ``{1, omega}``."""
    w = omega(z.d)
    c1 = z.int_coords()
    c2 = (z * w).int_coords()
    return [[c1[0], c2[0]], [c1[1], c2[1]]]


def ideal_basis(gens: list[FieldElem]) -> list[list[int]]:
    """Columns spanning the Z-lattice ``sum g*O_F`` in ring coordinates."""
    cols: list[list[int]] = []
    for g in gens:
        m = _mul_matrix(g)
        cols.append([m[0][0], m[1][0]])
        cols.append([m[0][1], m[1][1]])
    return cols


def ideal_index(gens: list[FieldElem]) -> int:
    """Index ``[O_F : sum g*O_F]`` via integer column echelon form."""
    cols = ideal_basis(gens)
    A = [[c[0] for c in cols], [c[1] for c in cols]]
    H, _, rank = col_echelon(A)
    if rank < 2:
        raise FieldError("zero ideal has infinite index")
    return abs(H[0][0] * H[1][1])


def residues(c: FieldElem) -> list[FieldElem]:
    """A full set of representatives of ``O_F / c O_F``."""
    cols = ideal_basis([c])
    H, _, rank = col_echelon([[x[0] for x in cols], [x[1] for x in cols]])
    if rank < 2:
        raise FieldError("residues modulo zero are not finite")
    return [FieldElem.from_ring(u, v, c.d) for u in range(abs(H[0][0])) for v in range(abs(H[1][1]))]


def in_ideal(z: FieldElem, gens: list[FieldElem]) -> bool:
    cols = ideal_basis(gens)
    A = [[c[0] for c in cols], [c[1] for c in cols]]
    return solve_int(A, list(z.int_coords())) is not None


def ideal_gcd(a: FieldElem, b: FieldElem) -> FieldElem:
    """Generator of ``a*O_F + b*O_F`` as a canonical associate.

    Any element of the ideal whose norm equals the ideal's index generates it
    (class number one), so no Euclidean division is needed.
    """
    return ideal_gcd_many([a, b])


def ideal_gcd_many(elems: list[FieldElem]) -> FieldElem:
    gens = [z for z in elems if z]
    if not gens:
        raise FieldError("gcd of zero elements is undefined")
    for z in gens:
        if not is_integral(z):
            raise FieldError(f"{z} is not integral")
    d = gens[0].d
    if len(gens) == 1:
        return canonical_associate(gens[0])
    # cheap path: one generator divides all others
    for g in sorted(gens, key=lambda z: z.norm()):
        if all(divides(g, z) for z in gens):
            return canonical_associate(g)
    n = ideal_index(gens)
    for z in elements_of_norm(n, d):
        if in_ideal(z, gens):
            return canonical_associate(z)
    raise AssertionError(f"no generator of norm {n} found; class number is not one?")


def bezout(a: FieldElem, b: FieldElem) -> tuple[FieldElem, FieldElem, FieldElem]:
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g = ideal_gcd(a, b)``."""
    if not a and not b:
        raise FieldError("bezout(0, 0) is undefined")
    d = (a or b).d
    zero = FieldElem(0, 0, d)
    g = ideal_gcd(a, b)
    if a and divides(a, b):
        return g, g / a, zero
    if b and divides(b, a):
        return g, zero, g / b
    cols = ideal_basis([a, b])
    A = [[c[0] for c in cols], [c[1] for c in cols]]
    sol = solve_int(A, list(g.int_coords()))
    if sol is None:
        raise AssertionError("gcd is not in the ideal")
    s = FieldElem.from_ring(sol[0], sol[1], d)
    t = FieldElem.from_ring(sol[2], sol[3], d)
    return g, s, t


def factor_int(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def primes_above(p: int, d: int) -> tuple[FieldElem, ...]:
    """Canonical prime elements dividing the rational prime ``p``."""
    found: list[FieldElem] = []
    for z in elements_of_norm(p, d):
        c = canonical_associate(z)
        if not any(are_associate(c, f) for f in found):
            found.append(c)
    if not found:
        return (FieldElem(p, 0, d),)
    return tuple(found)


def valuation(z: FieldElem, pi: FieldElem) -> int:
    if not z:
        raise FieldError("valuation of zero")
    k = 0
    while divides(pi, z):
        z = z / pi
        k += 1
    return k


def factor(z: FieldElem) -> list[tuple[FieldElem, int]]:
    """Prime factorisation of a nonzero integral element (unit part dropped)."""
    if not is_integral(z) or not z:
        raise FieldError(f"cannot factor {z}")
    out = []
    for p in sorted(factor_int(int(z.norm()))):
        for pi in primes_above(p, z.d):
            k = valuation(z, pi)
            if k:
                out.append((pi, k))
    return out


_SQRT_RE = re.compile(r"^(?P<coef>[+-]?(?:\d+(?:/\d+)?)?)\*?sqrt\((?P<d>-?\d+)\)$")


def _split_terms(t: str) -> list[str]:
    """Split on top-level +/- (not inside parentheses, not leading)."""
    terms, depth, cur = [], 0, ""
    for i, ch in enumerate(t):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and cur[-1] not in "*/(":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    return terms


def parse_elem(text: str, d: int) -> FieldElem:
    """Parse ``"p/q+r/s*sqrt(d)"``; either part may be omitted."""
    t = str(text).replace(" ", "")
    if not t:
        raise FieldError("empty element")
    x = y = Fraction(0)
    for term in _split_terms(t):
        m = _SQRT_RE.match(term)
        if m:
            if int(m.group("d")) != d:
                raise FieldError(f"{text!r} uses sqrt({m.group('d')}) but the field has d={d}")
            c = m.group("coef")
            y += Fraction(1) if c in ("", "+") else Fraction(-1) if c == "-" else Fraction(c)
        else:
            try:
                x += Fraction(term)
            except (ValueError, ZeroDivisionError):
                raise FieldError(f"cannot parse field element {text!r}") from None
    return FieldElem(x, y, d)


def format_elem(z: FieldElem) -> str:
    if not z:
        return "0"
    parts = []
    if z.x:
        parts.append(str(z.x))
    if z.y:
        ys = "" if z.y == 1 else "-" if z.y == -1 else f"{z.y}*"
        s = f"{ys}sqrt({z.d})"
        if parts and not s.startswith("-"):
            s = "+" + s
        parts.append(s)
    return "".join(parts)


def gcd_int(*xs: int) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
