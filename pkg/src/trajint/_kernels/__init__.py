"""Kernel backend selection.

The compiled ``_fast`` module is used when it is importable, unless the
environment variable ``TRAJINT_PURE_PYTHON`` is set to a non-empty value other
than ``0``.  ``BACKEND`` names the active implementation.
"""

from __future__ import annotations

import os

from . import _pure
from ._pure import ATTAINED, UNBOUNDED

_force_pure = os.environ.get("TRAJINT_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure backend requested")
    from . import _fast as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pure
    BACKEND = "python"

pl_minimize_float = _impl.pl_minimize
grid_scan = _impl.grid_scan
pl_minimize_generic = _pure.pl_minimize

__all__ = [
    "ATTAINED",
    "BACKEND",
    "UNBOUNDED",
    "grid_scan",
    "pl_minimize_float",
    "pl_minimize_generic",
]
