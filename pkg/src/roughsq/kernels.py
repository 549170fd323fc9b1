"""Kernel selection: compiled extension when available, else pure Python.

Set ``ROUGHSQ_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("ROUGHSQ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = None
else:
    _impl = None

if _impl is None:
    from . import _kernels_py as _impl

interp_pair_sum = _impl.interp_pair_sum

__all__ = ["BACKEND", "interp_pair_sum"]
