"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise the numpy fallback.
Set ``OLT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

if os.environ.get("OLT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "python"

fwht_int64 = _impl.fwht_int64
mobius_u8 = _impl.mobius_u8
gray_min_distance = _impl.gray_min_distance
residual_update = _impl.residual_update
lnds_length = _impl.lnds_length
lipschitz_keep = _impl.lipschitz_keep

__all__ = [
    "BACKEND",
    "fwht_int64",
    "mobius_u8",
    "gray_min_distance",
    "residual_update",
    "lnds_length",
    "lipschitz_keep",
]
