"""Selects the campaign kernel backend at import time.

The compiled extension is preferred when it built; the pure-Python twin
is the fallback and is also forced by setting ``LEAPVOTE_PURE=1`` in the
environment (useful for benchmarking and differential testing).  Both
backends produce identical results, so the choice affects speed only.
"""

import os

from . import _kernel_py

impl = _kernel_py
if not os.environ.get("LEAPVOTE_PURE"):
    try:
        from . import _kernel as _compiled

        impl = _compiled
    except ImportError:
        pass

BACKEND = impl.backend_name()


def available_backends() -> dict:
    """Name -> module for every importable backend."""
    backends = {"pure": _kernel_py}
    try:
        from . import _kernel as _compiled

        backends["compiled"] = _compiled
    except ImportError:
        pass
    return backends
