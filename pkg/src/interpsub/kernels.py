"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``INTERPSUB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("INTERPSUB_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py

refine_upsampled = _impl.refine_upsampled
newton_coefficients = _impl.newton_coefficients
newton_to_monomial = _impl.newton_to_monomial
