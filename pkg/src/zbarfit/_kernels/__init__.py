"""Hot-kernel backend selection.

The compiled Cython core is preferred when it imported cleanly; the NumPy
fallback is always available.  Set ZBARFIT_PURE=1 to force the fallback.
"""

import os

from . import _purepy

if os.environ.get("ZBARFIT_PURE", "") not in ("", "0"):
    _impl = _purepy
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _purepy

winding_mindist = _impl.winding_mindist
sw_matvec = _impl.sw_matvec
cauchy_sum = _impl.cauchy_sum
BACKEND = _impl.BACKEND


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'purepy'."""
    return BACKEND
