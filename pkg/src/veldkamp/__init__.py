"""Geometric hyperplanes and Veldkamp lines of Segre varieties S_k(q), q = 2, 3."""

from __future__ import annotations

from .geometry import SegreVariety, build
from .space import VeldkampSpace, space

__version__ = "0.1.0"

__all__ = ["SegreVariety", "VeldkampSpace", "build", "space", "__version__"]
