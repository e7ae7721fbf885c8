"""Coarse scales: analytic solids that bound the part at the top level.

These are single-cell scales (the grid covers the whole bounding box) with
exact or Lipschitz-certified signed distances, so the composition rule and the
ray caster can trust every value they return.
"""

import numpy as np

from .geometry import box_signed_distance
from .grid import NeighborhoodGrid
from .model import Scale


def _box_grid(lo, hi):
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if np.any(hi <= lo):
        raise ValueError("box must have positive extent on every axis")
    return NeighborhoodGrid(lo, hi - lo, (1, 1, 1))


class BoxScale(Scale):
    """Axis-aligned box with an exact signed distance."""

    def __init__(self, lo, hi, **kw):
        super().__init__(_box_grid(lo, hi), **kw)
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)

    def membership(self, pts):
        return self.distance(pts) <= 0.0

    def distance(self, pts):
        return box_signed_distance(pts, self.lo, self.hi)

    def describe(self):
        return {"kind": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


class SphereScale(Scale):
    """Ball with an exact signed distance."""

    def __init__(self, center, radius, **kw):
        radius = float(radius)
        if radius <= 0.0:
            raise ValueError("radius must be positive")
        c = np.asarray(center, dtype=np.float64)
        super().__init__(_box_grid(c - radius, c + radius), **kw)
        self.center = c
        self.radius = radius

    def membership(self, pts):
        return self.distance(pts) <= 0.0

    def distance(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        return np.linalg.norm(pts - self.center, axis=1) - self.radius

    def describe(self):
        return {"kind": "sphere", "center": self.center.tolist(),
                "radius": self.radius}


class ImplicitScale(Scale):
    """Level set f(p) <= 0 of a user field, scaled by a Lipschitz bound.

    ``fn`` maps (n,3) points to (n,) values; ``lipschitz`` must bound the true
    Lipschitz constant of ``fn`` over the box, which makes f/L a conservative
    signed distance.  Built-in presets stay serializable; arbitrary callables
    work for queries but cannot go through a model file.
    """

    def __init__(self, fn, lipschitz, lo, hi, preset=None, **kw):
        super().__init__(_box_grid(lo, hi), **kw)
        if float(lipschitz) <= 0.0:
            raise ValueError("lipschitz bound must be positive")
        self.fn = fn
        self.lipschitz = float(lipschitz)
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)
        self.preset = preset

    def membership(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        return np.asarray(self.fn(pts)) <= 0.0

    def distance(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
        return np.asarray(self.fn(pts)) / self.lipschitz

    def describe(self):
        if self.preset is None:
            raise ValueError(
                "implicit scale built from a raw callable is not serializable")
        out = dict(self.preset)
        out.update({"kind": "implicit", "lo": self.lo.tolist(),
                    "hi": self.hi.tolist()})
        return out


def _halfspace(normal, offset):
    n = np.asarray(normal, dtype=np.float64)
    nn = np.linalg.norm(n)
    if nn == 0.0:
        raise ValueError("plane normal must be nonzero")
    n = n / nn

    def fn(pts):
        return pts @ n - float(offset)

    return fn, 1.0


def _shell(center, r_outer, r_inner):
    c = np.asarray(center, dtype=np.float64)
    r_outer = float(r_outer)
    r_inner = float(r_inner)
    if not 0.0 < r_inner < r_outer:
        raise ValueError("shell needs 0 < inner < outer radius")
    mid = 0.5 * (r_outer + r_inner)
    half = 0.5 * (r_outer - r_inner)

    def fn(pts):
        return np.abs(np.linalg.norm(pts - c, axis=1) - mid) - half

    return fn, 1.0


def implicit_preset(spec, lo, hi, **kw):
    """Build a serializable ImplicitScale from a preset description."""
    kind = spec.get("fn")
    if kind == "halfspace":
        fn, lip = _halfspace(spec["normal"], spec["offset"])
    elif kind == "shell":
        fn, lip = _shell(spec["center"], spec["outer"], spec["inner"])
    else:
        raise ValueError(f"unknown implicit preset {kind!r}")
    return ImplicitScale(fn, lip, lo, hi, preset=spec, **kw)


def linear_material_field(origin, gradient, base=1.0):
    """Graded material helper: base + gradient . (p - origin)."""
    o = np.asarray(origin, dtype=np.float64)
    g = np.asarray(gradient, dtype=np.float64)

    def field(pts):
        return base + (pts - o) @ g

    field.preset = {"field": "linear", "origin": o.tolist(),
                    "gradient": g.tolist(), "base": float(base)}
    return field
