import pytest

from mspectra.linalg import GF, QQ
from mspectra.linalg import Matrix
from mspectra.multicomplex import Multicomplex


@pytest.fixture(params=["Q", "F5"])
def field(request):
    return QQ if request.param == "Q" else GF(5)


def make_K(N=4, field=QQ):
    """x at (0,0), d_0 x at (0,1), every other structure map zero."""
    return Multicomplex(N, field, {(0, 0): 1, (0, 1): 1}, {(0, (0, 0)): Matrix.identity(field, 1)})


@pytest.fixture
def K():
    return make_K()
