"""Backend selection: compiled kernels when available, NumPy otherwise.

Set SCOPEGARCH_BACKEND=python to force the fallback (used by the parity
tests and the benchmark); any other value, or an import failure of the
extension, is resolved silently in favor of whatever works.
"""

import os

from . import _kernels_py

__all__ = ["kernels", "BACKEND", "HAVE_COMPILED"]

try:
    from . import _kernels
    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False

if os.environ.get("SCOPEGARCH_BACKEND") == "python" or not HAVE_COMPILED:
    kernels = _kernels_py
    BACKEND = "python"
else:
    kernels = _kernels
    BACKEND = "compiled"
