"""Kernel selection: compiled core when built, numpy fallback otherwise.

Set CLIFFGR_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import _purepy

BACKEND = "python"
jet_mul = _purepy.jet_mul
blade_bilinear = _purepy.blade_bilinear

if os.environ.get("CLIFFGR_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:  # extension not built
        pass
    else:
        jet_mul = _kernels.jet_mul
        blade_bilinear = _kernels.blade_bilinear
        BACKEND = "compiled"
