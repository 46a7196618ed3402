"""Selects the compiled kernels when built, the numpy fallback otherwise.

Set FERMAT_KIT_PURE_PYTHON=1 to force the fallback.
"""
import os

from . import _kernels_py

if os.environ.get("FERMAT_KIT_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

eval_packed = _impl.eval_packed
conv2d = _impl.conv2d

IMPLEMENTATIONS = {"python": _kernels_py}
if BACKEND == "cython":
    IMPLEMENTATIONS["cython"] = _impl
