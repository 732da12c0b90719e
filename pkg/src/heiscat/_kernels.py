"""Backend selection for the hot Laurent-polynomial kernels.

The compiled extension is used when it was built and ``HEISCAT_PURE`` is
unset; otherwise the pure-Python module is used.  Both expose ``ladd`` and
``lmul`` on dicts mapping ``(ez, et)`` to rational coefficients.
"""

import os

BACKEND = "python"

if os.environ.get("HEISCAT_PURE"):
    from heiscat._pykernels import ladd, lmul
else:
    try:
        from heiscat._ckernels import ladd, lmul

        BACKEND = "cython"
    except ImportError:
        from heiscat._pykernels import ladd, lmul

__all__ = ["ladd", "lmul", "BACKEND"]
