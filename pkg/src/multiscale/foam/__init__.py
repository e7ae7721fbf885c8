from .scale import FoamParams, VoronoiFoamScale
from .seeds import SeedSet, gather_seeds, pack_cell_id, seed_for_cell

__all__ = [
    "FoamParams",
    "VoronoiFoamScale",
    "SeedSet",
    "gather_seeds",
    "pack_cell_id",
    "seed_for_cell",
]
