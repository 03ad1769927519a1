import pytest

from mspectra.algebra import basis as anbasis
from mspectra.linalg import GF, QQ, rank
from mspectra.multicomplex import is_isomorphism, validate, validate_morphism
from mspectra.randgen import make_rng, random_multicomplex
from mspectra.representables import (
    FIRST,
    bw,
    first_side_families,
    generating_sets,
    hom_from_cone,
    iota,
    iota_images,
    iota_relation_defects,
    q_projection,
    zw,
    zw_infinity_basis,
    zw_infinity_window,
)
from mspectra.spectral import page, witness_cycles


def test_zw0_is_free():
    X = zw(3, 0, 0, 0)
    for b in [(0, 0), (-1, 0), (-2, 0), (0, 1), (-3, -1)]:
        assert len(X.basis(b)) == len(anbasis(3, *b))


def test_zw_generators():
    X = zw(4, 3, 2, -1)
    assert [g.name for g in X.generators] == ["a_0", "a_1", "a_2"]
    assert [g.bidegree for g in X.generators] == [(2, -1), (1, -2), (0, -3)]


def test_zw_chain_relation():
    # d_0 a_2 = d_1 a_1 - d_2 a_0
    X = zw(3, 3, 0, 0)
    lhs = X.act(0, ((), 2))
    rhs = {}
    for i, k, s in [(1, 1, 1), (2, 0, -1)]:
        for e, c in X.act(i, ((), k)).items():
            rhs[e] = rhs.get(e, 0) + s * c
    rhs = {e: c for e, c in rhs.items() if c}
    assert lhs == rhs


def test_zw_bicomplex_finite():
    X = zw(2, 2, 0, 0)
    assert X.is_finite
    W = X.window(QQ)
    assert validate(W) == []


def test_bw_generators():
    Y = bw(4, 3, 0, 0)
    names = [g.name for g in Y.generators]
    assert names == ["b_0", "b_1", "a", "c_0", "c_1"]
    assert Y.generators[0].bidegree == (2, 2)
    assert Y.generators[2].bidegree == (0, 0)
    assert Y.generators[3].bidegree == (-1, 0)
    assert len(bw(4, 1, 0, 0).generators) == 1


def test_iota_examples():
    Y = bw(4, 2, 0, -1)
    imgs = iota_images(4, 2, 0, 0)
    ia, ib, ic = Y.generator_index("a"), Y.generator_index("b_0"), Y.generator_index("c_0")
    # a_0 -> d_0 a - d_1 b_0 ; a_1 -> d_1 a - d_2 b_0 + c_0
    assert imgs[0] == {((0,), ia): 1, ((1,), ib): -1}
    assert imgs[1] == {((1,), ia): 1, ((2,), ib): -1, ((), ic): 1}


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_iota_well_defined(N):
    for r in range(1, 6):
        assert iota_relation_defects(N, r, 0, 0) == []


@pytest.mark.parametrize("N", [2, 4])
def test_iota_window_is_morphism(N):
    for r in range(1, 4):
        f = iota(N, r, 0, 0).window(QQ, -2 * r - 1)
        assert validate_morphism(f) == []


@pytest.mark.parametrize("N", [2, 3, 4])
def test_representability(N, field):
    """Hom(ZW_k(p,q), A) is exactly the space of witness k-cycles at (p,q)."""
    rng = make_rng(40 + N)
    for _ in range(8):
        A = random_multicomplex(rng, N, field)
        for b in A.support[:4]:
            for k in range(0, 4):
                H, _, _ = hom_from_cone(zw(N, k, *b), A)
                assert H == witness_cycles(A, k, *b), (k, b)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_q_projection_surjective_on_low_pages(N):
    for r in (1, 2, 3):
        f = q_projection(N, r, QQ)
        assert validate_morphism(f) == []
        from mspectra.spectral import page_map_status

        for i in range(0, r + 1):
            for st in page_map_status(f, FIRST, i):
                if st.trusted:
                    assert st.surjective, (r, i, st)


@pytest.mark.parametrize("N", [2, 4])
def test_zw_infinity_stabilises(N):
    for u in range(-4, 1):
        for q in range(-6, 3):
            n1 = len(zw_infinity_basis(N, 0, 0, (u, q)))
            s = max(2 - u, 1)
            assert len(zw(N, s + 1, 0, 0).basis((u, q))) == n1
            assert len(zw(N, s + 3, 0, 0).basis((u, q))) == n1
    assert validate(zw_infinity_window(N, 0, 0, QQ, -3)) == []


def test_generating_set_conventions():
    I, J = first_side_families(2)
    assert I == [("J", 1), ("I", 3)]
    assert J == [("J", 0), ("J", 1), ("J", 2)]
    I0, J0 = first_side_families(0)
    assert I0 == [("I", 1)] and J0 == [("J", 0)]
    gens = generating_sets(2, 1, 0, (0, 0, 0, 0))
    assert [str(g) for g in gens["I"]] == [
        "'I: iota_2: ZW_2(0,0) -> BW_2(0,-1)",
        "''I: iota_1: ZW_1(0,0) -> BW_1(0,-1)",
    ]
    assert len(gens["J"]) == 3


@pytest.mark.parametrize("N", [2, 4])
def test_iota_detects_boundaries(N):
    """Witness boundaries at (p,q) are images of Hom(BW_r, A) under iota_r."""
    from mspectra.spectral import witness_boundaries
    from mspectra.representables import precompose_matrix
    from mspectra.linalg import Subspace

    rng = make_rng(90 + N)
    for _ in range(5):
        A = random_multicomplex(rng, N, QQ)
        for b in A.support[:3]:
            for r in (1, 2, 3):
                phi = iota(N, r, *b)
                X, Y = phi.source, phi.target
                HY, ly, ny = hom_from_cone(Y, A)
                _, lx, nx = hom_from_cone(X, A)
                P = precompose_matrix(phi, A, lx, nx, ly, ny)
                img = Subspace.span(QQ, nx, [P.apply(h) for h in HY.basis])
                assert img == witness_boundaries(A, r, *b)
