"""Selects the relaxation kernel implementation.

The compiled extension is used when present; setting SHOLO_PURE_PYTHON
to a nonempty value forces the numpy fallback. Both implementations
share one signature set, so callers import `kernels` and stay agnostic.
"""

from __future__ import annotations

import os


def _select():
    if os.environ.get("SHOLO_PURE_PYTHON"):
        from . import _kernels_py

        return _kernels_py, "python"
    try:
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels, "compiled"
    except ImportError:
        from . import _kernels_py

        return _kernels_py, "python"


kernels, BACKEND = _select()


def backend_name() -> str:
    """Name of the active kernel backend: "compiled" or "python"."""
    return BACKEND
