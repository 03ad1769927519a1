import pytest

from mspectra.linalg import GF, QQ, Matrix
from mspectra.multicomplex import (
    Morphism,
    Multicomplex,
    ShapeError,
    direct_sum,
    hom_dimension,
    identity,
    involve,
    involve_morphism,
    inv_bidegree,
    point_module,
    shift,
    validate,
    validate_morphism,
)
from mspectra.randgen import make_rng, random_morphism, random_multicomplex, square_block

from conftest import make_K


def test_shift_and_involution_bidegrees():
    assert shift(0) == (0, 1)
    assert shift(3) == (-3, -2)
    for N in range(2, 7):
        for b in [(0, 0), (3, -2), (-4, 5)]:
            assert inv_bidegree(N, inv_bidegree(N, b)) == b
        for i in range(N):
            assert inv_bidegree(N, shift(i)) == shift(N - 1 - i)


def test_K_is_valid(K):
    assert validate(K) == []


def test_violation_reported():
    one = Matrix.identity(QQ, 1)
    # d0 d0 = 0 fails
    A = Multicomplex(2, QQ, {(0, 0): 1, (0, 1): 1, (0, 2): 1}, {(0, (0, 0)): one, (0, (0, 1)): one})
    v = validate(A)
    assert v and v[0].l == 0


def test_shape_error():
    with pytest.raises(ShapeError):
        Multicomplex(2, QQ, {(0, 0): 1}, {(0, (0, 0)): Matrix.identity(QQ, 1)})


def test_point_module_hom():
    P = point_module(3, QQ, (1, 2))
    assert hom_dimension(P, P) == 1
    assert hom_dimension(P, point_module(3, QQ, (0, 0))) == 0


def test_involution_examples(K):
    IK = involve(K)
    assert IK.support == sorted([(0, 0), (-3, -2)])
    assert involve(IK) == K
    assert validate(IK) == []


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_random_objects_valid(N, field):
    rng = make_rng(N)
    for _ in range(15):
        A = random_multicomplex(rng, N, field)
        assert validate(A) == []
        assert validate(involve(A)) == []
        assert involve(involve(A)) == A
        for b in A.support:
            assert 0 <= b[0] < 5 and 0 <= b[1] < 5
            assert A.rank(b) <= 3


@pytest.mark.parametrize("N", [2, 4])
def test_random_morphisms_valid(N):
    rng = make_rng(100 + N)
    for _ in range(30):
        f = random_morphism(rng, N, GF(5) if rng.random() < 0.5 else QQ)
        assert validate_morphism(f) == []
        g = involve_morphism(f)
        assert validate_morphism(g) == []
        h = involve_morphism(g)
        assert h.source == f.source and h.target == f.target
        assert all(h.block(b) == f.block(b) for b in f.source.support)


def test_direct_sum_and_square():
    for N in (2, 3, 4):
        S = square_block(N, QQ)
        assert validate(S) == []
        D = direct_sum(S, make_K(N))
        assert validate(D) == []
        assert D.total_dim() == 6


def test_non_morphism_detected(K):
    two = Matrix.from_rows(QQ, [[QQ(2)]])
    f = Morphism(K, K, {(0, 0): Matrix.identity(QQ, 1), (0, 1): two})
    assert validate_morphism(f)
    assert validate_morphism(identity(K)) == []
