"""Kernel backend selection.

Two interchangeable backends implement the same raw-int interface: _pure
(always present, any n <= 16) and _ckern (compiled, n <= 8). The env var
TRANSVERSAL_PURE=1, read at import time, forces the pure backend everywhere.
"""

import os

from . import _pure
from ._pure import SearchAborted

_FORCE_PURE = bool(os.environ.get("TRANSVERSAL_PURE"))

try:
    from . import _ckern
except ImportError:
    _ckern = None

C_LIMIT = 8


def available():
    names = ["pure"]
    if _ckern is not None:
        names.append("c")
    return names


def get(name):
    if name == "pure":
        return _pure
    if name == "c" and _ckern is not None:
        return _ckern
    raise ValueError("unknown kernel backend: %r" % (name,))


def backend_for(n):
    """Fastest available backend that can handle board size n."""
    if _ckern is not None and not _FORCE_PURE and n <= C_LIMIT:
        return _ckern
    return _pure
