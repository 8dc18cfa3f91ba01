"""Kernel backend selection.

The hot inner loops exist twice: numba-jitted (default) and pure numpy.
Set METASCENE_BACKEND=numpy to force the fallback, =numba to require the
jitted path (raising if numba is unavailable).  The default "auto"
prefers numba and silently falls back.
"""

from __future__ import annotations

import os

_requested = os.environ.get("METASCENE_BACKEND", "auto").strip().lower() or "auto"
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"METASCENE_BACKEND must be 'auto', 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import numpy_impl as impl
elif _requested == "numba":
    from . import numba_impl as impl
else:
    try:
        from . import numba_impl as impl  # type: ignore[no-redef]
    except ImportError:
        from . import numpy_impl as impl  # type: ignore[no-redef]

backend_name: str = impl.BACKEND

__all__ = ["impl", "backend_name"]
