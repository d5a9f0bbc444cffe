"""Kernel backend selection: compiled extension if available, else pure Python.

Set MERTENS_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
cross-backend equality tests).
"""

import os

from . import _kernels_py

_force_py = os.environ.get("MERTENS_PURE_PYTHON", "") not in ("", "0")

if _force_py:
    kernels = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        HAVE_COMPILED = True
    except ImportError:
        kernels = _kernels_py
        HAVE_COMPILED = False


def get_backend(name=None):
    """Return a kernel module by name: None (selected), 'python', 'compiled'."""
    if name is None:
        return kernels
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels  # raises ImportError when not built

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
