"""Exact and finite-field tools for polar maps, Hessians and homaloidal hypersurfaces."""

from .fields import GF, QQ, P_MEDIUM, P_SMALL
from .poly import MPoly, parse
from .matrix import PolyMatrix, det

__version__ = "0.1.0"

__all__ = ["GF", "QQ", "P_SMALL", "P_MEDIUM", "MPoly", "parse", "PolyMatrix", "det", "__version__"]
