"""Select the compiled kernels when available, else the numpy fallback.

Set ``DIGS_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names the
implementation in use.
"""
import os

from . import _kernels_py

if os.environ.get("DIGS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
chi_resonant = _impl.chi_resonant
chi_general = _impl.chi_general
