"""Per-cell Voronoi edge precomputation, both flavors.

Method 1 keeps candidate bisector lines of seed triplets (validity is checked
per query point, like the naive test). Method 2 derives true finite edges
from the Delaunay tetrahedralization: one segment per interior face, between
the two adjacent circumcenters. Both cull against the cell box inflated by
``beamRadius + cellEdge/2``: the beam radius covers membership, the extra
half edge covers the capped distance query, so naive and precomputed paths
minimize over the same candidates.
"""

from dataclasses import dataclass

import numpy as np

from .._accel import NUMBA_ENABLED
from . import _kern, _npq
from .delaunay import build_tetrahedralization


@dataclass(frozen=True)
class FoamCellPrecomp:
    """Everything a set query needs for one cell, immutable once built."""

    cell: tuple
    method: str                # "m1" | "m2"
    seeds: np.ndarray          # (125, 3) gathered block
    trip: np.ndarray           # (E, 3) int32 local seed ids, sorted
    ptr: np.ndarray            # (126,) CSR over seeds
    inc: np.ndarray            # (3E,) incident edge ids
    box_lo: np.ndarray
    box_hi: np.ndarray
    # method 1 geometry
    base: np.ndarray = None
    dirn: np.ndarray = None
    # method 2 geometry
    seg_a: np.ndarray = None
    seg_w: np.ndarray = None
    seg_ww: np.ndarray = None

    @property
    def edge_count(self):
        return self.trip.shape[0]

    @property
    def nbytes(self):
        total = 0
        for arr in (self.seeds, self.trip, self.ptr, self.inc, self.base,
                    self.dirn, self.seg_a, self.seg_w, self.seg_ww):
            if arr is not None:
                total += arr.nbytes
        return total


def inflated_box(lo, hi, beam_radius, cell_edge):
    pad = beam_radius + 0.5 * cell_edge
    return lo - pad, hi + pad


def precompute_edges_m1(seed_set, cell_lo, cell_hi, beam_radius, cell_edge):
    lo, hi = inflated_box(np.asarray(cell_lo, dtype=np.float64),
                          np.asarray(cell_hi, dtype=np.float64),
                          beam_radius, cell_edge)
    seeds = np.ascontiguousarray(seed_set.points)
    if NUMBA_ENABLED:
        base, dirn, trip, ptr, inc = _kern.precompute_m1(
            seeds, lo[0], lo[1], lo[2], hi[0], hi[1], hi[2])
    else:
        base, dirn, trip, ptr, inc = _npq.precompute_m1(seeds, lo, hi)
    return FoamCellPrecomp(cell=seed_set.center_cell, method="m1",
                           seeds=seeds, trip=trip, ptr=ptr, inc=inc,
                           box_lo=lo, box_hi=hi, base=base, dirn=dirn)


def precompute_edges_m2(seed_set, cell_lo, cell_hi, beam_radius, cell_edge,
                        tet=None):
    lo, hi = inflated_box(np.asarray(cell_lo, dtype=np.float64),
                          np.asarray(cell_hi, dtype=np.float64),
                          beam_radius, cell_edge)
    seeds = np.ascontiguousarray(seed_set.points)
    if tet is None:
        tet = build_tetrahedralization(seed_set)
    if NUMBA_ENABLED:
        seg_a, seg_w, seg_ww, trip, ptr, inc = _kern.precompute_m2(
            tet.tets, np.ascontiguousarray(tet.circumcenters),
            seeds.shape[0], lo[0], lo[1], lo[2], hi[0], hi[1], hi[2])
    else:
        seg_a, seg_w, seg_ww, trip, ptr, inc = _npq.precompute_m2(
            tet.tets, tet.circumcenters, seeds.shape[0], lo, hi)
    return FoamCellPrecomp(cell=seed_set.center_cell, method="m2",
                           seeds=seeds, trip=trip, ptr=ptr, inc=inc,
                           box_lo=lo, box_hi=hi, seg_a=seg_a, seg_w=seg_w,
                           seg_ww=seg_ww)
