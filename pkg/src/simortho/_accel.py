"""Backend selection for the GF(p) kernels.

The compiled extension is used when it imported and the modulus fits in 31
bits; otherwise the pure-Python module runs. Set ``SIMORTHO_PURE_PYTHON=1``
to force the fallback.
"""

import os

from . import _pykernels

try:
    if os.environ.get("SIMORTHO_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"
_C_LIMIT = 2 ** 31


def backend_for(p):
    if _ckernels is not None and p < _C_LIMIT:
        return _ckernels
    return _pykernels


def rref_mod_p(rows, ncols, p):
    return backend_for(p).rref_mod_p(rows, ncols, p)


def det_mod_p(rows, p):
    return backend_for(p).det_mod_p(rows, p)


def congruence_search(grams, n, p):
    return backend_for(p).congruence_search(grams, n, p)
