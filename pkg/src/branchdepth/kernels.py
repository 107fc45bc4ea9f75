"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  Setting the environment variable
``BRANCHDEPTH_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("BRANCHDEPTH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
    _impl = compiled_kernels
else:
    BACKEND = "python"
    _impl = python_kernels

gf_rank = _impl.gf_rank
leaf_search = _impl.leaf_search

__all__ = ["BACKEND", "compiled_kernels", "gf_rank", "leaf_search", "python_kernels"]
