import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermcusp import fmatrix as fm
from hermcusp.bridge import (
    BridgeError,
    embed,
    image_type,
    image_type_closed_form,
    j_matrix,
    kernels_agree,
    ortho_classify,
    ortho_cusp,
    preserves,
    rat_eye,
    rat_mul,
    rat_scale,
    trace_summary,
)
from hermcusp.cusps import SubgroupSpec, classify, in_group, type_from_units
from hermcusp.lattice import trace_gram, validate
from hermcusp.qf import FieldElem, omega, parse_elem, sqrt_d, units

from conftest import all_types, lat, lattices, random_unitary, vec
from cusp_scan import existence_scan

HYP_D2 = [["0", "-1/4*sqrt(-2)"], ["1/4*sqrt(-2)", "0"]]
SQRT2_PLANE = [["0", "sqrt(-2)"], ["-sqrt(-2)", "0"]]


def rat_add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


# ---------------------------------------------------------------- embedding


def test_embed_minus_identity():
    M = fm.scalar(FieldElem(-1, 0, -2), 3)
    assert embed(M) == rat_scale(-1, rat_eye(6))


def test_gaussian_i_is_j():
    d = -1
    X = embed(fm.scalar(sqrt_d(d), 2))
    assert X == j_matrix(d, 2)
    assert X[0][:2] == [0, -1] and X[1][:2] == [1, 0]


def test_eisenstein_cube_root():
    d = -3
    w3 = parse_elem("-1/2+1/2*sqrt(-3)", d)
    X = embed(fm.scalar(w3, 2))
    I = rat_eye(4)
    assert rat_add(rat_add(rat_mul(X, X), X), I) == [[0] * 4 for _ in range(4)]
    assert rat_mul(rat_mul(X, X), X) == I


def test_j_blocks():
    J = j_matrix(-2, 2)
    assert J == [[0, -2, 0, 0], [1, 0, 0, 0], [0, 0, 0, -2], [0, 0, 1, 0]]


@pytest.mark.parametrize("d", [-1, -2, -3, -7, -11, -163])
def test_j_squared(d):
    J = j_matrix(d, 3)
    assert rat_mul(J, J) == rat_scale(d, rat_eye(6))


@settings(max_examples=100)
@given(lattices(ds=(-1, -2, -3, -7), max_rank=3, h=2, isotropic_first=True), st.integers(0, 10**6))
def test_embed_homomorphism(L, seed):
    rng = random.Random(seed)
    M, N = random_unitary(L, rng), random_unitary(L, rng)
    assert embed(fm.mat_mul(M, N)) == rat_mul(embed(M), embed(N))
    G = trace_gram(L)
    assert preserves(G, embed(M)) and preserves(G, embed(N))
    J = j_matrix(L.d, L.rank)
    X = embed(M)
    assert rat_mul(rat_mul(J, X), J) == rat_scale(L.d, X)
    assert rat_mul(J, X) == rat_mul(X, J)


@settings(max_examples=30)
@given(lattices(ds=(-1, -2, -3), max_rank=3, h=2, isotropic_first=True), st.integers(0, 10**6))
def test_embed_injective(L, seed):
    rng = random.Random(seed)
    M, N = random_unitary(L, rng), random_unitary(L, rng)
    assert (M == N) == (embed(M) == embed(N))


@settings(max_examples=30)
@given(lattices(ds=(-1, -2, -3), max_rank=3, h=2, isotropic_first=True), st.integers(0, 10**6))
def test_unitary_kernel_lands_in_orthogonal_kernel(L, seed):
    M = random_unitary(L, random.Random(seed))
    u, o = kernels_agree(L, M)
    if u:
        assert o


# ---------------------------------------------------------------- image cusps


def test_ortho_cusp_unimodular_plane():
    L = lat(-2, HYP_D2)
    oc = ortho_cusp(L, L.basis_vector(0))
    G = trace_gram(L)
    for x in oc.basis:
        for y in oc.basis:
            assert sum(x[i] * G[i][j] * y[j] for i in range(4) for j in range(4)) == 0


def test_ortho_cusp_eisenstein_uses_ring_omega():
    d = -3
    c = 1 / sqrt_d(d)
    z = FieldElem(0, 0, d)
    L = validate(d, [[z, c], [-c, z]])
    oc = ortho_cusp(L, L.basis_vector(0))
    w = omega(d)
    assert w == parse_elem("1/2+1/2*sqrt(-3)", d)
    assert oc.basis[1] == (0, 1, 0, 0)


def test_ortho_cusp_diagonal_vector():
    L = lat(-2, SQRT2_PLANE)
    oc = ortho_cusp(L, vec(-2, 1, 1))
    assert len(oc.basis) == 2


def test_ortho_classify_unimodular():
    L = lat(-2, HYP_D2)
    assert ortho_classify(L, L.basis_vector(0), SubgroupSpec.disc_kernel()).name == "R2_O"


def test_scan_hits_map_as_predicted():
    res = existence_scan(-1, (("I2",), ("SI2", "I4")))
    for hit in res.hits.values():
        L = validate(-1, hit.gram)
        e = L.basis_vector(0)
        spec = SubgroupSpec.fix([hit.cls])
        t = classify(L, e, spec)
        o = ortho_classify(L, e, spec)
        assert o.regular == image_type(t, -1).regular
        if t.name == "SI2":
            assert o.regular
        if t.name == "I2":
            assert o.name == "I2_O"


# ---------------------------------------------------------------- lookup


def test_eleven_types():
    names = {t.name for _, t in all_types()}
    assert len(names) == 11
    assert len(all_types()) == 3 + 6 + 9


@pytest.mark.parametrize("d,t", all_types(), ids=lambda x: str(x) if isinstance(x, int) else x.name)
def test_lookup_equals_closed_form(d, t):
    assert image_type(t, d).regular == image_type_closed_form(t).regular
    assert image_type(t, d) == image_type_closed_form(t)


def test_lookup_examples():
    types = {(d, t.name): t for d, t in all_types()}
    assert image_type(types[(-1, "SI2")], -1).regular
    assert image_type(types[(-3, "I6")], -3).name == "I2_O"
    assert image_type(types[(-1, "R4")], -1).regular
    assert image_type(types[(-3, "SI2")], -3).name == "I2_O"


def test_lookup_rejects_foreign_type():
    t = type_from_units(-1, set(units(-1)), set(units(-1)))
    with pytest.raises(BridgeError):
        image_type(t, -7)


def test_trace_summary():
    s = trace_summary(lat(-2, HYP_D2))
    assert s == {"signature": [2, 2], "det": 1, "even": True, "rank": 4}


def test_in_group_and_embedding_agree_on_minus_identity():
    L = lat(-2, SQRT2_PLANE)
    M = fm.scalar(FieldElem(-1, 0, -2), 2)
    u, o = kernels_agree(L, M)
    assert u == bool(in_group(M, L, SubgroupSpec.disc_kernel()))
    assert not u or o
