"""Scale base class and the multiscale composition model.

A model is an ordered list of scales, coarsest first.  Point queries walk the
scales per point; set queries group the points per consulted scale and hand
whole neighborhoods to scales that implement a set specialization.  Both walks
share the consultation rule: a scale participates only while the requested
length scale is at or below its cell edge, and points already outside an
earlier scale are never forwarded to a finer one.
"""

from dataclasses import dataclass, field

import numpy as np

from .grid import NeighborhoodGrid
from .pointsets import PointSource, group_for_grid, materialize


@dataclass
class ScaleStats:
    """Per-scale counters filled in during one query run."""

    label: str = ""
    point_calls: int = 0
    points_in: int = 0
    setq_calls: int = 0
    groups: int = 0
    precomp_builds: int = 0
    fastpath_hits: int = 0

    def merge(self, other):
        self.point_calls += other.point_calls
        self.points_in += other.points_in
        self.setq_calls += other.setq_calls
        self.groups += other.groups
        self.precomp_builds += other.precomp_builds
        self.fastpath_hits += other.fastpath_hits


@dataclass
class QueryStats:
    """Counters for one dispatch, one entry per consulted scale."""

    scales: list = field(default_factory=list)

    def scale(self, i, label):
        while len(self.scales) <= i:
            self.scales.append(ScaleStats())
        st = self.scales[i]
        if not st.label:
            st.label = label
        return st

    def total_builds(self):
        return sum(s.precomp_builds for s in self.scales)


class Scale:
    """One level of structure: a membership/distance/material field on a grid.

    Subclasses must provide vectorized ``membership`` and ``distance`` over
    (n,3) point arrays.  ``distance`` is a conservative signed estimate: it
    never exceeds the true distance in magnitude and its sign agrees with
    ``membership``.  Scales with a per-neighborhood precomputation additionally
    implement the set-query hooks.
    """

    def __init__(self, grid, material=1.0, material_field=None,
                 set_query_enabled=True):
        if not isinstance(grid, NeighborhoodGrid):
            raise TypeError("grid must be a NeighborhoodGrid")
        self.grid = grid
        self.material = float(material)
        self.material_field = material_field
        # Escape hatch: force the default per-group loop even when a set
        # specialization exists (used to validate equivalence).
        self.set_query_enabled = set_query_enabled

    @property
    def cell_edge(self):
        return self.grid.cell_edge

    @property
    def label(self):
        return type(self).__name__

    # -- point interface -------------------------------------------------
    def membership(self, pts):
        raise NotImplementedError

    def distance(self, pts):
        raise NotImplementedError

    def material_at(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        if self.material_field is not None:
            return np.asarray(self.material_field(pts), dtype=np.float64)
        return np.full(pts.shape[0], self.material)

    # -- set interface ---------------------------------------------------
    def has_set_query(self):
        return False

    def set_membership(self, grouped, stats=None):
        raise NotImplementedError

    def set_distance(self, grouped, stats=None):
        raise NotImplementedError

    # Hook for persistent precomputation caches (raycaster): returns the
    # opaque per-cell object, or None when the scale has nothing to build.
    def build_cell(self, cell):
        return None


class MultiscaleModel:
    """Ordered composition of scales, coarsest first.

    Membership is the conjunction of the consulted scales.  Signed distance is
    the intersection bound: the coarse value outside the coarse scale, and the
    pointwise max across consulted scales inside (each scale's field clamps
    the finer ones).  Material comes from the finest consulted scale; points
    outside the composite read the void material 0.
    """

    def __init__(self, scales):
        if not scales:
            raise ValueError("model needs at least one scale")
        edges = [s.cell_edge for s in scales]
        for a, b in zip(edges, edges[1:]):
            if b > a + 1e-12 * max(a, 1.0):
                raise ValueError(
                    "scales must be ordered coarsest first "
                    f"(cell edges {edges})")
        self.scales = list(scales)

    def consulted(self, length_scale):
        """Scales participating at the requested resolution."""
        out = []
        for s in self.scales:
            if s.cell_edge < length_scale:
                break
            out.append(s)
        return out

    # -- per-point queries ----------------------------------------------
    def point_membership(self, pts, length_scale=0.0, stats=None):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        alive = np.ones(pts.shape[0], dtype=bool)
        for i, s in enumerate(self.consulted(length_scale)):
            if not alive.any():
                break
            st = stats.scale(i, s.label) if stats is not None else None
            sub = pts[alive]
            ok = s.membership(sub)
            if st is not None:
                st.point_calls += 1
                st.points_in += sub.shape[0]
            alive[np.flatnonzero(alive)[~ok]] = False
        return alive

    def point_distance(self, pts, length_scale=0.0, stats=None):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        dist = np.full(pts.shape[0], np.inf)
        alive = np.ones(pts.shape[0], dtype=bool)
        for i, s in enumerate(self.consulted(length_scale)):
            if not alive.any():
                break
            st = stats.scale(i, s.label) if stats is not None else None
            idx = np.flatnonzero(alive)
            d = s.distance(pts[idx])
            if st is not None:
                st.point_calls += 1
                st.points_in += idx.shape[0]
            if i == 0:
                dist[idx] = d
            else:
                dist[idx] = np.maximum(dist[idx], d)
            alive[idx[d > 0.0]] = False
        return dist

    def point_material(self, pts, length_scale=0.0, stats=None):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        cons = self.consulted(length_scale)
        inside = self.point_membership(pts, length_scale, stats)
        mat = np.zeros(pts.shape[0])
        if inside.any() and cons:
            mat[inside] = cons[-1].material_at(pts[inside])
        return mat

    # -- set queries -----------------------------------------------------
    def _set_walk(self, source, length_scale, stats, want_distance):
        if not isinstance(source, PointSource):
            raise TypeError("set queries take a point source")
        coords = None
        n = source.count
        alive = np.ones(n, dtype=bool)
        dist = np.full(n, np.inf) if want_distance else None
        for i, s in enumerate(self.consulted(length_scale)):
            if not alive.any():
                break
            st = stats.scale(i, s.label) if stats is not None else None
            use_set = s.has_set_query() and s.set_query_enabled
            if use_set:
                grouped = group_for_grid(s.grid, source, alive=alive)
                if st is not None:
                    st.setq_calls += 1
                    st.groups += grouped.group_count
                    st.points_in += grouped.point_count
                if want_distance:
                    vals = s.set_distance(grouped, stats=st)
                else:
                    vals = s.set_membership(grouped, stats=st)
                slots = grouped.slots
            else:
                if coords is None:
                    coords = materialize(source)
                slots = np.flatnonzero(alive)
                if want_distance:
                    vals = s.distance(coords[slots])
                else:
                    vals = s.membership(coords[slots])
                if st is not None:
                    st.point_calls += 1
                    st.points_in += slots.shape[0]
            if want_distance:
                if i == 0:
                    dist[slots] = vals
                else:
                    dist[slots] = np.maximum(dist[slots], vals)
                alive[slots[vals > 0.0]] = False
            else:
                alive[slots[~vals]] = False
        return (dist, alive) if want_distance else alive

    def set_membership(self, source, length_scale=0.0, stats=None):
        return self._set_walk(source, length_scale, stats, want_distance=False)

    def set_distance(self, source, length_scale=0.0, stats=None):
        dist, _ = self._set_walk(source, length_scale, stats,
                                 want_distance=True)
        return dist

    def set_material(self, source, length_scale=0.0, stats=None):
        inside = self.set_membership(source, length_scale, stats)
        cons = self.consulted(length_scale)
        mat = np.zeros(source.count)
        if inside.any() and cons:
            coords = materialize(source)
            mat[inside] = cons[-1].material_at(coords[inside])
        return mat
