"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise, or when
``CAVITYLOSS_PURE_PYTHON`` is set to a non-empty value, the numpy versions are
used. ``BACKEND`` names the active choice.
"""
import os

from . import _kernels_py

if os.environ.get("CAVITYLOSS_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

hermite_table = _impl.hermite_table
mode_overlaps = _impl.mode_overlaps
