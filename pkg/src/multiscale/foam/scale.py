"""The Voronoi foam fine scale.

Shape definition (per point): gather the (2*ring+1)^3 neighborhood seeds,
find the closest seed, and test whether the point lies within beamRadius of a
Voronoi edge formed by a seed triplet that includes the closest seed, where
the foot of the perpendicular onto the candidate bisector line must itself be
Voronoi-valid. The naive path evaluates exactly that; the set-query paths
precompute the candidate edges per cell (Method 1: culled bisector lines;
Method 2: finite circumcenter segments from the Delaunay tetrahedralization)
and answer identical membership per point.

Distance queries return a conservative signed value: the minimum
interval-clamped edge distance minus beamRadius, capped at half a cell edge
and clamped in magnitude to half the distance to the second-closest seed.
"""

from dataclasses import dataclass

import numpy as np

from .._accel import NUMBA_ENABLED
from ..model import Scale
from . import _kern, _npq
from .edges import precompute_edges_m1, precompute_edges_m2
from .seeds import gather_seeds

_METHODS = ("naive", "m1", "m2")


@dataclass(frozen=True)
class FoamParams:
    """Foam shape parameters; beams must stay local to the neighborhood."""

    beam_radius: float
    salt: int = 0
    gather_ring: int = 2
    method: str = "m2"

    def validate(self, cell_edge):
        if not self.beam_radius > 0.0:
            raise ValueError("beam radius must be positive")
        if not self.beam_radius < 0.5 * cell_edge:
            raise ValueError(
                f"beam radius {self.beam_radius} must stay below half the "
                f"cell edge ({0.5 * cell_edge}); beams must remain local")
        if self.gather_ring < 1:
            raise ValueError("gather ring must be >= 1")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")


class VoronoiFoamScale(Scale):
    """Procedural open-cell foam on a neighborhood grid."""

    def __init__(self, grid, beam_radius, salt=0, gather_ring=2,
                 method="m2", **kw):
        super().__init__(grid, **kw)
        self.params = FoamParams(float(beam_radius), int(salt),
                                 int(gather_ring), method)
        self.params.validate(grid.cell_edge)
        # distance values are capped here; the precompute cull box is
        # inflated by the same amount so both paths see every relevant edge
        self.edge_cap = self.params.beam_radius + 0.5 * grid.cell_edge

    @property
    def label(self):
        return f"foam[{self.params.method}]"

    @property
    def _salt_u64(self):
        return np.uint64(self.params.salt & 0xFFFFFFFFFFFFFFFF)

    def _grid_scalars(self):
        o = self.grid.origin
        e = self.grid.cell_size
        return o[0], o[1], o[2], e[0], e[1], e[2]

    # -- naive per-point path -------------------------------------------
    def membership(self, pts):
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
        p = self.params
        if NUMBA_ENABLED:
            ox, oy, oz, ex, ey, ez = self._grid_scalars()
            return _kern.naive_membership_batch(
                pts, self._salt_u64, p.gather_ring,
                ox, oy, oz, ex, ey, ez, p.beam_radius)
        return _npq.naive_membership_batch(
            pts, p.salt, p.gather_ring, self.grid.origin,
            self.grid.cell_size, p.beam_radius)

    def distance(self, pts):
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
        p = self.params
        if NUMBA_ENABLED:
            ox, oy, oz, ex, ey, ez = self._grid_scalars()
            return _kern.naive_distance_batch(
                pts, self._salt_u64, p.gather_ring,
                ox, oy, oz, ex, ey, ez, p.beam_radius, self.edge_cap)
        return _npq.naive_distance_batch(
            pts, p.salt, p.gather_ring, self.grid.origin,
            self.grid.cell_size, p.beam_radius, self.edge_cap)

    # -- set-query path --------------------------------------------------
    def has_set_query(self):
        return self.params.method != "naive"

    def build_cell(self, cell):
        """Precompute the edge set for one cell (immutable, cacheable)."""
        p = self.params
        seed_set = gather_seeds(self.grid, cell, p.salt, p.gather_ring)
        lo = self.grid.cell_low(cell)
        hi = self.grid.cell_high(cell)
        if p.method == "m1":
            return precompute_edges_m1(seed_set, lo, hi, p.beam_radius,
                                       self.grid.cell_edge)
        return precompute_edges_m2(seed_set, lo, hi, p.beam_radius,
                                   self.grid.cell_edge)

    def cell_membership(self, pre, pts):
        """Membership for points inside ``pre``'s cell."""
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
        r = self.params.beam_radius
        if pre.method == "m1":
            if NUMBA_ENABLED:
                return _kern.set_membership_m1(
                    pts, pre.seeds, pre.base, pre.dirn, pre.trip,
                    pre.ptr, pre.inc, r)
            return _npq.set_membership_m1(
                pts, pre.seeds, pre.base, pre.dirn, pre.trip,
                pre.ptr, pre.inc, r)
        if NUMBA_ENABLED:
            return _kern.set_membership_m2(
                pts, pre.seeds, pre.seg_a, pre.seg_w, pre.seg_ww,
                pre.ptr, pre.inc, r)
        return _npq.set_membership_m2(
            pts, pre.seeds, pre.seg_a, pre.seg_w, pre.seg_ww,
            pre.ptr, pre.inc, r)

    def cell_distance(self, pre, pts):
        pts = np.ascontiguousarray(np.atleast_2d(pts), dtype=np.float64)
        r = self.params.beam_radius
        if pre.method == "m1":
            if NUMBA_ENABLED:
                return _kern.set_distance_m1(
                    pts, pre.seeds, pre.base, pre.dirn, pre.trip,
                    pre.ptr, pre.inc, r, self.edge_cap)
            return _npq.set_distance_m1(
                pts, pre.seeds, pre.base, pre.dirn, pre.trip,
                pre.ptr, pre.inc, r, self.edge_cap)
        if NUMBA_ENABLED:
            return _kern.set_distance_m2(
                pts, pre.seeds, pre.seg_a, pre.seg_w, pre.seg_ww,
                pre.ptr, pre.inc, r, self.edge_cap)
        return _npq.set_distance_m2(
            pts, pre.seeds, pre.seg_a, pre.seg_w, pre.seg_ww,
            pre.ptr, pre.inc, r, self.edge_cap)

    def _set_walk(self, grouped, stats, fn):
        out = None
        for g in range(grouped.group_count):
            cell, pts, _slots = grouped.group(g)
            pre = self.build_cell(cell)
            if stats is not None:
                stats.precomp_builds += 1
            vals = fn(pre, pts)
            if out is None:
                out = np.empty(grouped.point_count, dtype=vals.dtype)
            out[grouped.ptr[g]:grouped.ptr[g + 1]] = vals
        if out is None:
            out = np.empty(0)
        return out

    def set_membership(self, grouped, stats=None):
        out = self._set_walk(grouped, stats, self.cell_membership)
        return out.astype(bool, copy=False)

    def set_distance(self, grouped, stats=None):
        return self._set_walk(grouped, stats, self.cell_distance)

    def describe(self):
        p = self.params
        return {"kind": "foam", "beamRadius": p.beam_radius, "salt": p.salt,
                "gatherRing": p.gather_ring, "method": p.method}
