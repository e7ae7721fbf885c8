"""Small vectorized geometric primitives shared across modules and tests."""

import numpy as np


def box_signed_distance(pts, lo, hi):
    """Exact signed distance to an axis-aligned box (negative inside)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    under = lo - pts
    over = pts - hi
    outside = np.maximum(np.maximum(under, over), 0.0)
    d_out = np.sqrt(np.sum(outside * outside, axis=1))
    d_in = np.min(np.minimum(-under, -over), axis=1)
    return np.where(d_out > 0.0, d_out, -d_in)


def segment_distance(pts, a, b):
    """Distance from (n,3) points to one segment [a, b]."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w = b - a
    ww = float(np.dot(w, w))
    if ww == 0.0:
        return np.linalg.norm(pts - a, axis=1)
    t = np.clip((pts - a) @ w / ww, 0.0, 1.0)
    q = a + t[:, None] * w
    return np.linalg.norm(pts - q, axis=1)


def min_segment_distance(pts, segs_a, segs_b):
    """(n,) min distance from points to a set of segments (m,3)/(m,3)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    a = np.asarray(segs_a, dtype=np.float64)
    w = np.asarray(segs_b, dtype=np.float64) - a
    ww = np.sum(w * w, axis=1)
    ww = np.where(ww == 0.0, 1.0, ww)
    rel = pts[:, None, :] - a[None, :, :]
    t = np.clip(np.sum(rel * w[None, :, :], axis=2) / ww[None, :], 0.0, 1.0)
    q = rel - t[:, :, None] * w[None, :, :]
    return np.sqrt(np.min(np.sum(q * q, axis=2), axis=1))


def segment_box_intersects(a, b, lo, hi):
    """True if segment [a,b] meets the closed box [lo,hi] (exact slab test)."""
    a = np.asarray(a, dtype=np.float64)
    d = np.asarray(b, dtype=np.float64) - a
    t0, t1 = 0.0, 1.0
    for k in range(3):
        if d[k] == 0.0:
            if a[k] < lo[k] or a[k] > hi[k]:
                return False
        else:
            u = (lo[k] - a[k]) / d[k]
            v = (hi[k] - a[k]) / d[k]
            if u > v:
                u, v = v, u
            t0 = max(t0, u)
            t1 = min(t1, v)
            if t0 > t1:
                return False
    return True


def ray_box_intersect(origins, dirs, lo, hi):
    """Slab intersection of rays with a box.

    Returns (hit, t0, t1): parametric entry/exit with t clamped at 0 (origins
    inside the box give t0 = 0). Zero direction components are handled exactly.
    """
    o = np.atleast_2d(np.asarray(origins, dtype=np.float64))
    d = np.atleast_2d(np.asarray(dirs, dtype=np.float64))
    t0 = np.zeros(o.shape[0])
    t1 = np.full(o.shape[0], np.inf)
    ok = np.ones(o.shape[0], dtype=bool)
    for k in range(3):
        par = d[:, k] == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            u = (lo[k] - o[:, k]) / d[:, k]
            v = (hi[k] - o[:, k]) / d[:, k]
        swap = u > v
        u2 = np.where(swap, v, u)
        v2 = np.where(swap, u, v)
        inside = (o[:, k] >= lo[k]) & (o[:, k] <= hi[k])
        ok &= np.where(par, inside, True)
        t0 = np.where(par, t0, np.maximum(t0, u2))
        t1 = np.where(par, t1, np.minimum(t1, v2))
    ok &= t0 <= t1
    return ok, np.where(ok, t0, np.inf), np.where(ok, t1, -np.inf)


def tet_circumspheres(a, b, c, d):
    """Circumcenters and squared radii of tetrahedra (batched, Cramer form).

    Uses the cross-product formula relative to vertex ``a``; the scalar numba
    twin applies the same expression term-for-term so the two backends agree
    bitwise. Returns (centers, r2, det): degenerate (near-flat) tets report
    |det| ~ 0 and must be handled by the caller.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    u = np.atleast_2d(b) - a
    v = np.atleast_2d(c) - a
    w = np.atleast_2d(d) - a
    uu = np.sum(u * u, axis=1)
    vv = np.sum(v * v, axis=1)
    ww = np.sum(w * w, axis=1)
    vxw = np.cross(v, w)
    wxu = np.cross(w, u)
    uxv = np.cross(u, v)
    det = 2.0 * np.sum(u * vxw, axis=1)
    num = uu[:, None] * vxw + vv[:, None] * wxu + ww[:, None] * uxv
    with np.errstate(divide="ignore", invalid="ignore"):
        off = num / det[:, None]
    centers = a + off
    r2 = np.sum(off * off, axis=1)
    return centers, r2, det
