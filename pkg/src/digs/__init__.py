"""Steady states, susceptibility and dispersion of a pumped five-level atom
with two RF-dressed ground doublets."""

__version__ = "0.1.0"

from .errors import DigsError, RegimeWarning  # noqa: E402
from .params import SystemParams, ClosedPump, OpenPump, preset, validate  # noqa: E402

__all__ = ["__version__", "DigsError", "RegimeWarning", "SystemParams", "ClosedPump", "OpenPump", "preset",
           "validate"]
