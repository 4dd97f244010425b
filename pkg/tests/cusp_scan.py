"""Existence scan over 2x2 Gram matrices and a dense coset oracle for cusp types.

The oracle rebuilds every transvection straight from the Hermitian form and
checks membership by hand, so it shares no code with ``hermcusp.cusps`` beyond
the lattice itself.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from hermcusp.cusps import SubgroupSpec, classify, div_of
from hermcusp.lattice import LatticeError, disc_elements, discriminant_group, reduce_mod_lattice, validate
from hermcusp.qf import FieldElem, canonical_associate, elements_up_to_norm, inverse_different, is_integral, sqrt_d, units

NORM_BOUND = 32
# per field, groups of type names; a group is met by any one of its names
TARGETS = {-1: (("I2",), ("SI2", "I4")), -2: (("I2",),), -3: (("I2",),)}


def _integral(v):
    return all(is_integral(x) for x in v)


def _add(v, w):
    return tuple(a + b for a, b in zip(v, w))


def _scale(c, v):
    return tuple(c * a for a in v)


def oracle_map(L, e, zeta, lam):
    """Images of the basis under ``z -> zeta (z + 2 sqrt(d) lam <z, e> e)``."""
    c = 2 * sqrt_d(L.d) * lam
    cols = []
    for j in range(L.rank):
        b = L.basis_vector(j)
        cols.append(_scale(zeta, _add(b, _scale(c * L.form(b, e), e))))
    return cols


def oracle_member(L, cols, classes):
    if not all(_integral(col) for col in cols):
        return False
    n = L.rank
    for i in range(n):
        for j in range(n):
            if L.form(cols[i], cols[j]) != L.gram[i][j]:
                return False
    for x in classes:
        image = tuple(sum((x[j] * cols[j][i] for j in range(n)), FieldElem(0, 0, L.d)) for i in range(n))
        if not _integral(tuple(a - b for a, b in zip(image, x))):
            return False
    return True


@dataclass
class OracleResult:
    C: set
    Z0: set
    translations: list
    nonintegral_off_grid: bool


def dense_oracle(L, e, classes, g, density=4):
    """Enumerate ``(zeta, k/(density*g))`` for ``k`` over a full period and read off ``C`` and ``Z0``."""
    N = density * g
    hits = set()
    off_grid_ok = True
    for zeta in units(L.d):
        for k in range(N):
            lam = Fraction(k, N)
            cols = oracle_map(L, e, zeta, lam)
            integral = all(_integral(col) for col in cols)
            if integral and (lam * g).denominator != 1:
                off_grid_ok = False
            if oracle_member(L, cols, classes):
                hits.add((zeta, lam))
    C = {z for z, _ in hits}
    Z0 = {z for z, lam in hits if lam == 0}
    translations = sorted(lam for z, lam in hits if z == 1)
    return OracleResult(C, Z0, translations, off_grid_ok)


@dataclass
class ScanHit:
    d: int
    name: str
    gram: list
    cls: tuple
    lattices_tried: int


@dataclass
class ScanResult:
    d: int
    bound: int
    hits: dict = field(default_factory=dict)
    lattices_tried: int = 0
    exhausted: bool = False
    seconds: float = 0.0


def candidate_grams(d, bound=NORM_BOUND):
    """``[[0, b], [conj b, c]]`` with ``b, c`` in the inverse different, ``N(b/p), N(c/p) <= bound``.

    ``b`` is taken up to units (rescaling the second basis vector), ordered by norm.
    """
    p = inverse_different(d)
    elems = [z * p for z in elements_up_to_norm(bound, d)]
    zero = FieldElem(0, 0, d)
    reals = [zero] + [z for z in elems if z.is_real()]
    betas = sorted({canonical_associate(z / p) * p for z in elems}, key=lambda z: (z.norm(), z.x, z.y))
    reals.sort(key=lambda z: (abs(z.x), z.x))
    for b in betas:
        for c in reals:
            yield [[zero, b], [b.conj(), c]]


def _classes_up_to_units(L):
    seen = set()
    for x in disc_elements(discriminant_group(L)):
        if not any(x) or x in seen:
            continue
        for u in units(L.d):
            seen.add(reduce_mod_lattice(_scale(u, x)))
        yield x


@lru_cache(maxsize=None)
def existence_scan(d, targets, bound=NORM_BOUND):
    """Scan until one cusp of each target group is found, or the range is exhausted.

    ``targets`` is a tuple of tuples of type names; a group is met by any of its names.
    """
    start = time.perf_counter()
    res = ScanResult(d, bound)
    e = (FieldElem(1, 0, d), FieldElem(0, 0, d))
    open_groups = list(targets)
    for G in candidate_grams(d, bound):
        try:
            L = validate(d, G)
        except LatticeError:
            continue
        res.lattices_tried += 1
        for x in _classes_up_to_units(L):
            t = classify(L, e, SubgroupSpec.fix([x]))
            for grp in list(open_groups):
                if t.name in grp:
                    res.hits[grp] = ScanHit(d, t.name, G, x, res.lattices_tried)
                    open_groups.remove(grp)
        if not open_groups:
            break
    else:
        res.exhausted = True
    res.seconds = time.perf_counter() - start
    return res


def confirm(hit):
    """Dense oracle verdict for a scan hit: ``(C, Z0)`` sizes and the type table agreement."""
    L = validate(hit.d, hit.gram)
    e = (FieldElem(1, 0, hit.d), FieldElem(0, 0, hit.d))
    g = div_of(L, e).g
    return dense_oracle(L, e, [hit.cls], g)
