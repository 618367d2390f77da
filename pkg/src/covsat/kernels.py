"""Scan kernels used by the brute-force oracle.

The compiled extension is used when it was built; otherwise (or when
``COVSAT_PURE_PYTHON`` is set) the pure-Python versions are used. ``BACKEND``
names the active one.
"""

import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if not os.environ.get("COVSAT_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

if compiled_kernels is not None:
    first_satisfying = compiled_kernels.first_satisfying
    first_covering = compiled_kernels.first_covering
    BACKEND = "cython"
else:
    first_satisfying = python_kernels.first_satisfying
    first_covering = python_kernels.first_covering
    BACKEND = "python"

__all__ = ["BACKEND", "first_satisfying", "first_covering", "python_kernels", "compiled_kernels"]
