"""Select the compiled convolution kernel, falling back to pure Python.

Set LOOPDIRAC_FORCE_PY=1 to skip the compiled extension (used by the
benchmark and by tests that compare the two implementations).
"""

from __future__ import annotations

import os

if os.environ.get("LOOPDIRAC_FORCE_PY"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

COMPILED: bool = _impl.COMPILED


def graded_convolve(items_a, items_b, cap: int) -> dict:
    """Truncated convolution of (energy, parity, *coords) -> mult multisets."""
    return _impl.graded_convolve(items_a, items_b, cap)
