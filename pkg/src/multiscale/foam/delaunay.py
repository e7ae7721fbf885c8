"""Delaunay tetrahedralization of a gathered seed set.

Incremental Bowyer-Watson with a super-tetrahedron bootstrap, run on seeds
rescaled uniformly to the unit cube (spheres stay spheres under uniform
scaling, so the empty-circumsphere property transfers back exactly up to the
scale factor). Points within ``eps`` of a circumsphere count as inside it,
which both breaks cosphericity deterministically and favors retriangulation.
"""

from dataclasses import dataclass

import numpy as np

from .._accel import NUMBA_ENABLED
from . import _kern, _npq

GEO_EPS = 1e-9


@dataclass(frozen=True)
class Tetrahedralization:
    """Tets over a seed set, circumspheres in both unit and world coords.

    ``tets`` holds local seed indices (rows sorted ascending). The unit-cube
    arrays are the ones the empty-circumsphere tolerance applies to.
    """

    tets: np.ndarray            # (T, 4) int32
    circumcenters: np.ndarray   # (T, 3) world coordinates
    circumradii: np.ndarray     # (T,)
    unit_circumcenters: np.ndarray
    unit_radii: np.ndarray
    scale_origin: np.ndarray    # world = scale_origin + scale * unit
    scale: float
    eps: float

    @property
    def count(self):
        return self.tets.shape[0]


def rescale_to_unit(points):
    """Uniform scale-and-shift of points into (roughly) the unit cube."""
    mn = points.min(axis=0)
    extent = float((points.max(axis=0) - mn).max())
    if extent <= 0.0:
        raise ValueError("seed set is degenerate (zero extent)")
    return (points - mn) / extent, mn, extent


def build_tetrahedralization(seed_set, eps=GEO_EPS):
    """Bowyer-Watson over the seed set; errors out on coplanar input."""
    pts = seed_set.points
    if pts.shape[0] < 4:
        raise ValueError("need at least 4 seeds")
    unit, mn, extent = rescale_to_unit(pts)
    if NUMBA_ENABLED:
        tets, circ, rad = _kern.delaunay_unit(np.ascontiguousarray(unit), eps)
    else:
        tets, circ, rad = _npq.delaunay_unit(unit, eps)
    if tets.shape[0] == 0:
        raise ValueError("degenerate seed set (coplanar): no tetrahedra")
    return Tetrahedralization(
        tets=tets,
        circumcenters=mn + extent * circ,
        circumradii=extent * rad,
        unit_circumcenters=circ,
        unit_radii=rad,
        scale_origin=mn,
        scale=extent,
        eps=eps,
    )
