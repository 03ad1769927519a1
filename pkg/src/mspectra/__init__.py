"""Exact spectral sequences and model-structure checks for N-multicomplexes."""

from .kernels import BACKEND
from .linalg import GF, QQ, Matrix, Subspace
from .multicomplex import Morphism, Multicomplex, involve, validate, validate_morphism

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GF",
    "Matrix",
    "Morphism",
    "Multicomplex",
    "QQ",
    "Subspace",
    "involve",
    "validate",
    "validate_morphism",
    "__version__",
]
