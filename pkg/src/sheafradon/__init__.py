"""Exact cellular sheaves on the plane, their Radon transforms and the contact geometry behind them."""
from .cellsheaf import CellSheaf, compile_sheaf, indicator, microstalk, singular_support
from .euler import CFun, EulerRadonTransform, inversion_check, local_euler
from .exactlin import GradedDims
from .plgeom import LCSet, box, halfplane, interval
from .radon import LineQuery, direction_barcode, radon_stalk

__all__ = [
    "CellSheaf", "compile_sheaf", "indicator", "microstalk", "singular_support",
    "CFun", "EulerRadonTransform", "inversion_check", "local_euler", "GradedDims",
    "LCSet", "box", "halfplane", "interval", "LineQuery", "direction_barcode", "radon_stalk",
]
__version__ = "0.1.0"
