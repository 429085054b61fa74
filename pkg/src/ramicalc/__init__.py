"""Exact computations with piecewise-monomial functions over p^Q."""

from .errors import RamicalcError
from .valuation import INF, LogValue, Prime

__version__ = "0.1.0"

__all__ = ["INF", "LogValue", "Prime", "RamicalcError", "__version__"]
