"""Numerical radii in semi-Hilbertian spaces and a harness for checking bounds on them."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import SemiradError  # noqa: E402

__all__ = ["SemiradError", "__version__"]
