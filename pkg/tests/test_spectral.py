import pytest

from mspectra.linalg import GF, QQ
from mspectra.multicomplex import identity, involve, point_module
from mspectra.randgen import make_rng, random_morphism, random_multicomplex, square_block
from mspectra.representables import FIRST, SECOND, zw
from mspectra.spectral import (
    classical_pages,
    page,
    page_map_status,
    page_two_via_page_one,
    witness_dims_as_classical,
)

from conftest import make_K


def test_point_module_pages():
    P = point_module(4, QQ, (2, 1))
    for side in (FIRST, SECOND):
        for r in range(5):
            assert page(P, side, r).dims() == {(2, 1): 1}


def test_K_pages():
    K = make_K(4)
    assert page(K, FIRST, 0).dims() == {(0, 0): 1, (0, 1): 1}
    for r in (1, 2, 3):
        assert page(K, FIRST, r).dims() == {}
        assert page(K, SECOND, r).dims() == {(0, 0): 1, (0, 1): 1}


def test_square_is_acyclic_both_sides():
    for N in (2, 3, 4):
        S = square_block(N, QQ)
        for r in (1, 2, 3):
            assert page(S, FIRST, r).dims() == {}
            assert page(S, SECOND, r).dims() == {}


def test_second_side_is_involved_first_side():
    rng = make_rng(5)
    from mspectra.multicomplex import inv_bidegree

    for _ in range(10):
        A = random_multicomplex(rng, 3, QQ)
        for r in range(4):
            first = page(involve(A), FIRST, r).dims()
            second = page(A, SECOND, r).dims()
            assert second == {inv_bidegree(3, b): d for b, d in first.items()}


@pytest.mark.parametrize("N", [2, 3, 4])
def test_zw_pages(N):
    for k in (1, 2, 3):
        W = zw(N, k, 0, 0).window(QQ, -2 * k - 1)
        for i in range(1, k + 1):
            assert page(W, FIRST, i).trusted_dims() == {(0, 0): 1, (-k, 1 - k): 1}
        assert page(W, FIRST, k + 1).trusted_dims() == {}
        assert page(W, SECOND, 1).trusted_dims() == {}


@pytest.mark.parametrize("N", [2, 3, 4])
def test_oracle_agreement(N, field):
    rng = make_rng(17 * N)
    for _ in range(15):
        A = random_multicomplex(rng, N, field)
        for r in range(5):
            assert witness_dims_as_classical(A, r) == classical_pages(A, r), r
        assert page_two_via_page_one(A).dims() == page(A, FIRST, 2).dims()


def test_identity_induces_isomorphisms():
    rng = make_rng(11)
    for _ in range(10):
        A = random_multicomplex(rng, 4, GF(5))
        for side in (FIRST, SECOND):
            for r in range(4):
                assert all(st.iso for st in page_map_status(identity(A), side, r))


def test_page_maps_functorial_dims():
    """rank of g f on a page is at most the ranks of f and g there."""
    from mspectra.randgen import random_composable_pair

    rng = make_rng(12)
    for _ in range(15):
        f, g = random_composable_pair(rng, 3, QQ)
        gf = g @ f
        for r in range(3):
            rf = {st.bidegree: st.rank for st in page_map_status(f, FIRST, r)}
            rg = {st.bidegree: st.rank for st in page_map_status(g, FIRST, r)}
            for st in page_map_status(gf, FIRST, r):
                assert st.rank <= min(rf.get(st.bidegree, 0), rg.get(st.bidegree, 0))


def test_zero_object_pages():
    from mspectra.multicomplex import zero_multicomplex

    Z = zero_multicomplex(3, QQ)
    assert page(Z, FIRST, 2).dims() == {}
    assert classical_pages(Z, 2) == {}
