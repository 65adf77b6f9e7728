"""Approximation scheme and exact tools for 2D knapsack with wide rectangles."""
from .geometry import Box, PlacedRect, Polyline, Rect, Region
from .model import Instance, Item, Packing, validate_packing
from .driver import SolveOptions, SolveReport, pas_solve
from .exact import ExactQuery, exact_pack
from .oracle import opt_pack

__all__ = [
    "Box", "PlacedRect", "Polyline", "Rect", "Region",
    "Instance", "Item", "Packing", "validate_packing",
    "SolveOptions", "SolveReport", "pas_solve",
    "ExactQuery", "exact_pack", "opt_pack",
]
__version__ = "0.1.0"
