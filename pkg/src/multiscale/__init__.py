"""Multiscale shape and material queries.

Coarse analytic solids composed with procedural fine structure (Voronoi
foams, strut lattices, gyroids), queried per point or per point set with
per-neighborhood precomputation, plus a slicer, a ray caster, and a
benchmark harness built on the same queries.
"""

from ._accel import NUMBA_ENABLED
from .grid import NeighborhoodGrid, PointOutsideGridError
from .model import MultiscaleModel, QueryStats, Scale, ScaleStats
from .pointsets import (ExplicitPoints, GroupedPoints, RegularGridPoints,
                        StratifiedPoints, group_for_grid, materialize)

__all__ = [
    "NUMBA_ENABLED",
    "NeighborhoodGrid",
    "PointOutsideGridError",
    "MultiscaleModel",
    "QueryStats",
    "Scale",
    "ScaleStats",
    "ExplicitPoints",
    "GroupedPoints",
    "RegularGridPoints",
    "StratifiedPoints",
    "group_for_grid",
    "materialize",
]

__version__ = "0.1.0"
