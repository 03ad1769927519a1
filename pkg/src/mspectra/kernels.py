"""Backend selection for the row reduction kernels.

The compiled extension is used when it imports; setting ``MSPECTRA_PURE=1``
forces the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
rref_modp = _kernels_py.rref_modp
rref_int = _kernels_py.rref_int

if os.environ.get("MSPECTRA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        rref_modp = _ckernels.rref_modp
        rref_int = _ckernels.rref_int
        BACKEND = "cython"

__all__ = ["BACKEND", "rref_modp", "rref_int"]
