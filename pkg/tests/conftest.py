import time
from fractions import Fraction

from hypothesis import HealthCheck, assume, settings
from hypothesis import strategies as st

from hermcusp import fmatrix as fm
from hermcusp.cusps import div_of, enumerate_isotropic, transvection, type_from_units, type_table
from hermcusp.lattice import LatticeError, validate
from hermcusp.qf import FieldElem, inverse_different, parse_elem, units

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

DS = (-1, -2, -3, -7, -11, -19, -43, -67, -163)
SMALL_DS = (-1, -2, -3, -7)


def gram(d, rows):
    """Gram matrix from strings such as ``"1/2*sqrt(-2)"``."""
    return [[parse_elem(x, d) for x in row] for row in rows]


def lat(d, rows):
    return validate(d, gram(d, rows))


def vec(d, *xs):
    return tuple(parse_elem(str(x), d) for x in xs)


def hyperbolic(d):
    """The unimodular plane ``[[0, p], [conj p, 0]]`` with ``p`` the inverse different."""
    p = inverse_different(d)
    z = FieldElem(0, 0, d)
    return validate(d, [[z, p], [p.conj(), z]])


def real_dual_step(d):
    """Generator of the rationals inside the inverse different."""
    return Fraction(1, 2) if d % 4 in (2, 3) else Fraction(1)


def ring_elems(d, h=3):
    return st.builds(lambda u, v: FieldElem.from_ring(u, v, d), st.integers(-h, h), st.integers(-h, h))


@st.composite
def field_elems(draw, d, h=6):
    x = Fraction(draw(st.integers(-h, h)), draw(st.integers(1, 4)))
    y = Fraction(draw(st.integers(-h, h)), draw(st.integers(1, 4)))
    return FieldElem(x, y, d)


@st.composite
def lattices(draw, ds=SMALL_DS, max_rank=3, h=3, isotropic_first=False):
    """Random nondegenerate lattices with entries in the inverse different.

    With ``isotropic_first`` the first basis vector is isotropic.
    """
    d = draw(st.sampled_from(ds))
    n = draw(st.integers(2 if isotropic_first else 1, max_rank))
    p = inverse_different(d)
    step = real_dual_step(d)
    H = [[None] * n for _ in range(n)]
    for i in range(n):
        H[i][i] = FieldElem(step * draw(st.integers(-h, h)), 0, d)
        for j in range(i + 1, n):
            z = p * draw(ring_elems(d, h))
            H[i][j], H[j][i] = z, z.conj()
    if isotropic_first:
        H[0][0] = FieldElem(0, 0, d)
    try:
        return validate(d, H)
    except LatticeError:
        assume(False)


def random_unitary(L, rng, length=4):
    """A word in unit scalars and integral transvections along isotropic vectors of small height."""
    iso = enumerate_isotropic(L, 1)
    M = fm.identity(L.rank, L.d)
    for _ in range(length):
        if rng.random() < 0.3 or not iso:
            step = fm.scalar(rng.choice(units(L.d)), L.rank)
        else:
            e = rng.choice(iso)
            g = div_of(L, e).g
            step = transvection(L, e, Fraction(rng.randint(-3, 3), g))
        M = fm.mat_mul(M, step)
    return M


def all_types():
    """Every (field class, type) pair, with C and Z0 taken from the type table."""
    out = []
    for d in (-1, -3, -2):
        for (c, z), name in type_table(d).items():
            C = {u for u in units(d) if u**c == 1}
            Z0 = {u for u in units(d) if u**z == 1}
            out.append((d, type_from_units(d, C, Z0)))
    return out


SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(items):
    # the acceptance summary runs last so its runtime line covers the whole session
    items.sort(key=lambda it: "test_acceptance.py" in it.nodeid)
