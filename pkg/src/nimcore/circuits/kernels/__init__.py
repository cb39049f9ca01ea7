"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``NIMCORE_PURE=1`` in the environment to force the fallback even when
the extension is built (useful for comparing the two paths).
"""

import os

from . import pure

if os.environ.get("NIMCORE_PURE"):  # pragma: no cover - env-dependent
    _fast = None
    HAVE_FAST = False
else:
    try:  # pragma: no cover - presence depends on the build
        from . import _fast
        HAVE_FAST = True
    except ImportError:  # pragma: no cover
        _fast = None
        HAVE_FAST = False

BACKEND = "cython" if HAVE_FAST else "python"

__all__ = ["BACKEND", "HAVE_FAST", "pure", "_fast"]
