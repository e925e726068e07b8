"""Kernel dispatch: the compiled extension when available, else pure Python.

Set ``ISUB_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
the cross-implementation tests).
"""
import os

from . import _pykernels

BACKEND = "python"
brandes = _pykernels.brandes
core_number = _pykernels.core_number

if os.environ.get("ISUB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        brandes = _ckernels.brandes
        core_number = _ckernels.core_number
