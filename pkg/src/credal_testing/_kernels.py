"""Select the hot-kernel backend at import time.

The compiled ``_native`` extension is used when it was built; otherwise the
numpy ``_fallback`` is used. Set ``CREDAL_TESTING_BACKEND=python`` (or
``cython``) to force a choice.
"""
import os

from . import _fallback

_requested = os.environ.get("CREDAL_TESTING_BACKEND", "auto").lower()

if _requested == "python":
    backend = _fallback
else:
    try:
        from . import _native as backend
    except ImportError:
        if _requested == "cython":
            raise
        backend = _fallback

BACKEND = backend.NAME
gaussian_gram = backend.gaussian_gram
gram_mean = backend.gram_mean
h_matrix = backend.h_matrix
draw_components = backend.draw_components


def available_backends():
    """Return the backend modules importable in this environment, by name."""
    found = {"python": _fallback}
    try:
        from . import _native
    except ImportError:
        pass
    else:
        found["cython"] = _native
    return found
