"""Kernel selection: the compiled extension when importable, else numpy.

Set ``MSRKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("MSRKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        kernels = _compiled
        BACKEND = "cython"

INF = _fallback.INF


def available_backends():
    out = {"python": _fallback}
    try:
        from . import _kernels as _compiled
    except ImportError:
        return out
    out["cython"] = _compiled
    return out
