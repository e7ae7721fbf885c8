"""Numpy fallback for the foam kernels.

Used when numba is unavailable or disabled by MULTISCALE_DISABLE_NUMBA. The
scalar arithmetic mirrors _kern.py term for term (python floats are the same
doubles), so membership decisions agree bit for bit with the jitted path;
only the loop plumbing is different. Orders of magnitude slower on big point
sets, which the benchmark suite documents rather than hides.
"""

import numpy as np

from .. import rng
from . import _kern

BIG = _kern.BIG


def _gather_np(salt, cell, ring, origin, cell_size):
    span = np.arange(cell[0] - ring, cell[0] + ring + 1, dtype=np.int64)
    spany = np.arange(cell[1] - ring, cell[1] + ring + 1, dtype=np.int64)
    spanz = np.arange(cell[2] - ring, cell[2] + ring + 1, dtype=np.int64)
    cells = np.stack(np.meshgrid(span, spany, spanz, indexing="ij"),
                     axis=-1).reshape(-1, 3)
    keys = rng.cell_keys(salt, cells)
    u = np.stack([rng.uniforms(keys, rng.SEED_STREAM + a) for a in range(3)],
                 axis=-1)
    return origin + (cells + u) * cell_size


def _closest_two_np(seeds, px, py, pz):
    dx = px - seeds[:, 0]
    dy = py - seeds[:, 1]
    dz = pz - seeds[:, 2]
    d2 = dx * dx + dy * dy + dz * dz
    c = int(np.argmin(d2))
    if d2.shape[0] > 1:
        rest = np.delete(d2, c)
        second = float(np.min(rest))
    else:
        second = BIG
    return c, d2, float(d2[c]), second


def _triplet_line_s(seeds, a, b, c):
    abx = seeds[b, 0] - seeds[a, 0]
    aby = seeds[b, 1] - seeds[a, 1]
    abz = seeds[b, 2] - seeds[a, 2]
    acx = seeds[c, 0] - seeds[a, 0]
    acy = seeds[c, 1] - seeds[a, 1]
    acz = seeds[c, 2] - seeds[a, 2]
    aa = abx * abx + aby * aby + abz * abz
    bb = acx * acx + acy * acy + acz * acz
    abac = abx * acx + aby * acy + abz * acz
    det = aa * bb - abac * abac
    if det <= 1e-14 * aa * bb:
        return False, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    s = 0.5 * bb * (aa - abac) / det
    t = 0.5 * aa * (bb - abac) / det
    bx = seeds[a, 0] + s * abx + t * acx
    by = seeds[a, 1] + s * aby + t * acy
    bz = seeds[a, 2] + s * abz + t * acz
    nx = aby * acz - abz * acy
    ny = abz * acx - abx * acz
    nz = abx * acy - aby * acx
    inv = 1.0 / np.sqrt(det)
    return True, bx, by, bz, nx * inv, ny * inv, nz * inv


def _foot_valid_d2_s(seeds, a, b, c, bx, by, bz, ux, uy, uz, px, py, pz):
    t = (px - bx) * ux + (py - by) * uy + (pz - bz) * uz
    qx = bx + t * ux
    qy = by + t * uy
    qz = bz + t * uz
    dax = qx - seeds[a, 0]
    day = qy - seeds[a, 1]
    daz = qz - seeds[a, 2]
    ref = dax * dax + day * day + daz * daz
    dx = qx - seeds[:, 0]
    dy = qy - seeds[:, 1]
    dz = qz - seeds[:, 2]
    dd = dx * dx + dy * dy + dz * dz
    dd[a] = BIG
    dd[b] = BIG
    dd[c] = BIG
    if np.any(dd < ref):
        return False, BIG
    ddx = px - qx
    ddy = py - qy
    ddz = pz - qz
    return True, ddx * ddx + ddy * ddy + ddz * ddz


def _valid_interval_s(seeds, a, b, c, bx, by, bz, ux, uy, uz):
    dax = bx - seeds[a, 0]
    day = by - seeds[a, 1]
    daz = bz - seeds[a, 2]
    refa = dax * dax + day * day + daz * daz
    dkx = bx - seeds[:, 0]
    dky = by - seeds[:, 1]
    dkz = bz - seeds[:, 2]
    c0 = refa - (dkx * dkx + dky * dky + dkz * dkz)
    c1 = 2.0 * (ux * (seeds[:, 0] - seeds[a, 0])
                + uy * (seeds[:, 1] - seeds[a, 1])
                + uz * (seeds[:, 2] - seeds[a, 2]))
    keep = np.ones(seeds.shape[0], dtype=bool)
    keep[a] = keep[b] = keep[c] = False
    pos = keep & (c1 > 0.0)
    neg = keep & (c1 < 0.0)
    zero_bad = keep & (c1 == 0.0) & (c0 > 0.0)
    if np.any(zero_bad):
        return 1.0, -1.0
    thi = BIG
    tlo = -BIG
    if np.any(pos):
        thi = float(np.min(-c0[pos] / c1[pos]))
    if np.any(neg):
        tlo = float(np.max(-c0[neg] / c1[neg]))
    return tlo, thi


def _candidates(seeds, d2, c, thresh2):
    diff = d2 - d2[c]
    sx = seeds[:, 0] - seeds[c, 0]
    sy = seeds[:, 1] - seeds[c, 1]
    sz = seeds[:, 2] - seeds[c, 2]
    ss = sx * sx + sy * sy + sz * sz
    mask = diff * diff <= 4.0 * thresh2 * ss
    mask[c] = False
    return np.flatnonzero(mask)


def naive_membership_batch(points, salt, ring, origin, cell_size, r):
    n = points.shape[0]
    out = np.zeros(n, dtype=bool)
    r2 = r * r
    for i in range(n):
        px, py, pz = points[i]
        cell = np.floor((points[i] - origin) / cell_size).astype(np.int64)
        seeds = _gather_np(salt, cell, ring, origin, cell_size)
        c, d2, _, _ = _closest_two_np(seeds, px, py, pz)
        cand = _candidates(seeds, d2, c, r2)
        hit = False
        for ii in range(cand.shape[0]):
            for jj in range(ii + 1, cand.shape[0]):
                a, b, cc = sorted((c, int(cand[ii]), int(cand[jj])))
                ok, bx, by, bz, ux, uy, uz = _triplet_line_s(seeds, a, b, cc)
                if not ok:
                    continue
                valid, dd = _foot_valid_d2_s(seeds, a, b, cc, bx, by, bz,
                                             ux, uy, uz, px, py, pz)
                if valid and dd <= r2:
                    hit = True
                    break
            if hit:
                break
        out[i] = hit
    return out


def _distance_one(seeds, px, py, pz, r, edge_cap):
    c, d2, _, d2s = _closest_two_np(seeds, px, py, pz)
    best2 = edge_cap * edge_cap
    cand = _candidates(seeds, d2, c, best2)
    for ii in range(cand.shape[0]):
        for jj in range(ii + 1, cand.shape[0]):
            a, b, cc = sorted((c, int(cand[ii]), int(cand[jj])))
            ok, bx, by, bz, ux, uy, uz = _triplet_line_s(seeds, a, b, cc)
            if not ok:
                continue
            t = (px - bx) * ux + (py - by) * uy + (pz - bz) * uz
            qx = bx + t * ux
            qy = by + t * uy
            qz = bz + t * uz
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            if dx * dx + dy * dy + dz * dz >= best2:
                continue
            tlo, thi = _valid_interval_s(seeds, a, b, cc, bx, by, bz,
                                         ux, uy, uz)
            if tlo > thi:
                continue
            tc = min(max(t, tlo), thi)
            qx = bx + tc * ux
            qy = by + tc * uy
            qz = bz + tc * uz
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            dd = dx * dx + dy * dy + dz * dz
            if dd < best2:
                best2 = dd
    signed = np.sqrt(best2) - r
    capm = 0.5 * np.sqrt(d2s)
    return float(np.clip(signed, -capm, capm))


def naive_distance_batch(points, salt, ring, origin, cell_size, r, edge_cap):
    n = points.shape[0]
    out = np.empty(n)
    for i in range(n):
        cell = np.floor((points[i] - origin) / cell_size).astype(np.int64)
        seeds = _gather_np(salt, cell, ring, origin, cell_size)
        out[i] = _distance_one(seeds, points[i, 0], points[i, 1],
                               points[i, 2], r, edge_cap)
    return out


def precompute_m1(seeds, lo, hi):
    n = seeds.shape[0]
    ctr = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nv = seeds[None, :, :] - seeds[:, None, :]
    mid = 0.5 * (seeds[None, :, :] + seeds[:, None, :])
    s = np.einsum("ijk,ijk->ij", ctr - mid, nv)
    e = np.abs(nv[..., 0]) * half[0] + np.abs(nv[..., 1]) * half[1] \
        + np.abs(nv[..., 2]) * half[2]
    pairok = s * s <= e * e
    np.fill_diagonal(pairok, False)
    base = []
    dirn = []
    trip = []
    for i in range(n):
        part = np.flatnonzero(pairok[i, i + 1:]) + i + 1
        for jj in range(part.shape[0]):
            j = int(part[jj])
            for kk in range(jj + 1, part.shape[0]):
                k = int(part[kk])
                if not pairok[j, k]:
                    continue
                ok, bx, by, bz, ux, uy, uz = _triplet_line_s(seeds, i, j, k)
                if not ok:
                    continue
                if not _line_meets_box_s(bx, by, bz, ux, uy, uz, lo, hi):
                    continue
                base.append((bx, by, bz))
                dirn.append((ux, uy, uz))
                trip.append((i, j, k))
    return _pack_edges(base, dirn, trip, n)


def _line_meets_box_s(bx, by, bz, ux, uy, uz, lo, hi):
    t0 = -BIG
    t1 = BIG
    for (b, u, l, h) in ((bx, ux, lo[0], hi[0]), (by, uy, lo[1], hi[1]),
                         (bz, uz, lo[2], hi[2])):
        if u == 0.0:
            if b < l or b > h:
                return False
        else:
            a0 = (l - b) / u
            a1 = (h - b) / u
            if a0 > a1:
                a0, a1 = a1, a0
            t0 = max(t0, a0)
            t1 = min(t1, a1)
    return t0 <= t1


def _csr(trip_a, nseeds):
    ne = trip_a.shape[0]
    ptr = np.zeros(nseeds + 1, dtype=np.int64)
    for e in range(ne):
        for s in trip_a[e]:
            ptr[s + 1] += 1
    np.cumsum(ptr, out=ptr)
    inc = np.empty(3 * ne, dtype=np.int64)
    cur = ptr.copy()
    for e in range(ne):
        for s in trip_a[e]:
            inc[cur[s]] = e
            cur[s] += 1
    return ptr, inc


def _pack_edges(base, dirn, trip, nseeds):
    ne = len(base)
    base_a = np.asarray(base, dtype=np.float64).reshape(ne, 3)
    dirn_a = np.asarray(dirn, dtype=np.float64).reshape(ne, 3)
    trip_a = np.asarray(trip, dtype=np.int32).reshape(ne, 3)
    ptr, inc = _csr(trip_a, nseeds)
    return base_a, dirn_a, trip_a, ptr, inc


def _tet_circumsphere_s(verts, a, b, c, d):
    ax, ay, az = verts[a]
    ux = verts[b, 0] - ax
    uy = verts[b, 1] - ay
    uz = verts[b, 2] - az
    vx = verts[c, 0] - ax
    vy = verts[c, 1] - ay
    vz = verts[c, 2] - az
    wx = verts[d, 0] - ax
    wy = verts[d, 1] - ay
    wz = verts[d, 2] - az
    vwx = vy * wz - vz * wy
    vwy = vz * wx - vx * wz
    vwz = vx * wy - vy * wx
    den = 2.0 * (ux * vwx + uy * vwy + uz * vwz)
    if abs(den) < 1e-30:
        return ax, ay, az, BIG
    wux = wy * uz - wz * uy
    wuy = wz * ux - wx * uz
    wuz = wx * uy - wy * ux
    uvx = uy * vz - uz * vy
    uvy = uz * vx - ux * vz
    uvz = ux * vy - uy * vx
    uu = ux * ux + uy * uy + uz * uz
    vv = vx * vx + vy * vy + vz * vz
    ww = wx * wx + wy * wy + wz * wz
    offx = (uu * vwx + vv * wux + ww * uvx) / den
    offy = (uu * vwy + vv * wuy + ww * uvy) / den
    offz = (uu * vwz + vv * wuz + ww * uvz) / den
    rad = np.sqrt(offx * offx + offy * offy + offz * offz)
    return ax + offx, ay + offy, az + offz, rad


def delaunay_unit(pts, eps):
    """Line-for-line mirror of the jitted Bowyer-Watson (see _kern)."""
    n = pts.shape[0]
    nv = n + 4
    verts = np.empty((nv, 3))
    verts[:n] = pts
    big = 100.0
    verts[n] = (-big, -big, -big)
    verts[n + 1] = (3.0 * big, -big, -big)
    verts[n + 2] = (-big, 3.0 * big, -big)
    verts[n + 3] = (-big, -big, 3.0 * big)
    tets = [(n, n + 1, n + 2, n + 3)]
    cx, cy, cz, rr = _tet_circumsphere_s(verts, n, n + 1, n + 2, n + 3)
    circ = [(cx, cy, cz)]
    rad = [rr]
    reps2 = [(rr + eps) * (rr + eps)]
    alive = [True]
    for p in range(n):
        px, py, pz = verts[p]
        carr = np.asarray(circ)
        dx = px - carr[:, 0]
        dy = py - carr[:, 1]
        dz = pz - carr[:, 2]
        d2v = dx * dx + dy * dy + dz * dz
        bad = np.flatnonzero(np.asarray(alive) & (d2v < np.asarray(reps2)))
        fkeys = []
        fverts = []
        for t in bad:
            alive[t] = False
            row = tets[t]
            for f in range(4):
                tri = tuple(row[x] for x in range(4) if x != f)
                fkeys.append((tri[0] * nv + tri[1]) * nv + tri[2])
                fverts.append(tri)
        fkeys = np.asarray(fkeys, dtype=np.int64)
        order = np.argsort(fkeys)
        i = 0
        nf = fkeys.shape[0]
        while i < nf:
            j = i + 1
            while j < nf and fkeys[order[j]] == fkeys[order[i]]:
                j += 1
            if j - i == 1:
                tri = fverts[order[i]]
                row = tuple(sorted((tri[0], tri[1], tri[2], p)))
                cx, cy, cz, rr = _tet_circumsphere_s(verts, *row)
                tets.append(row)
                circ.append((cx, cy, cz))
                rad.append(rr)
                reps2.append((rr + eps) * (rr + eps))
                alive.append(True)
            i = j
    keep = [t for t in range(len(tets)) if alive[t] and tets[t][3] < n]
    otets = np.asarray([tets[t] for t in keep], dtype=np.int32).reshape(-1, 4)
    ocirc = np.asarray([circ[t] for t in keep]).reshape(-1, 3)
    orad = np.asarray([rad[t] for t in keep])
    return otets, ocirc, orad


def precompute_m2(tets, circ, nseeds, lo, hi):
    nt = tets.shape[0]
    fkeys = np.empty(4 * nt, dtype=np.int64)
    ftet = np.empty(4 * nt, dtype=np.int32)
    fv = np.empty((4 * nt, 3), dtype=np.int32)
    w = 0
    for t in range(nt):
        row = tets[t]
        for f in range(4):
            tri = [int(row[x]) for x in range(4) if x != f]
            fkeys[w] = (tri[0] * nseeds + tri[1]) * nseeds + tri[2]
            ftet[w] = t
            fv[w] = tri
            w += 1
    order = np.argsort(fkeys)
    seg_a = []
    seg_w = []
    trip = []
    i = 0
    nf = 4 * nt
    while i < nf:
        j = i + 1
        while j < nf and fkeys[order[j]] == fkeys[order[i]]:
            j += 1
        if j - i == 2:
            t0 = int(ftet[order[i]])
            t1 = int(ftet[order[i + 1]])
            if t1 < t0:
                t0, t1 = t1, t0
            a = circ[t0]
            b = circ[t1]
            if _seg_meets_box_s(a, b, lo, hi):
                seg_a.append((a[0], a[1], a[2]))
                seg_w.append((b[0] - a[0], b[1] - a[1], b[2] - a[2]))
                trip.append(tuple(int(v) for v in fv[order[i]]))
        i = j
    ne = len(seg_a)
    seg_a_a = np.asarray(seg_a, dtype=np.float64).reshape(ne, 3)
    seg_w_a = np.asarray(seg_w, dtype=np.float64).reshape(ne, 3)
    seg_ww = seg_w_a[:, 0] * seg_w_a[:, 0] + seg_w_a[:, 1] * seg_w_a[:, 1] \
        + seg_w_a[:, 2] * seg_w_a[:, 2]
    trip_a = np.asarray(trip, dtype=np.int32).reshape(ne, 3)
    ptr, inc = _csr(trip_a, nseeds)
    return seg_a_a, seg_w_a, seg_ww, trip_a, ptr, inc


def _seg_meets_box_s(a, b, lo, hi):
    t0 = 0.0
    t1 = 1.0
    for k in range(3):
        d = b[k] - a[k]
        if d == 0.0:
            if a[k] < lo[k] or a[k] > hi[k]:
                return False
        else:
            u = (lo[k] - a[k]) / d
            v = (hi[k] - a[k]) / d
            if u > v:
                u, v = v, u
            t0 = max(t0, u)
            t1 = min(t1, v)
    return t0 <= t1


def set_membership_m1(points, seeds, base, dirn, trip, ptr, inc, r):
    n = points.shape[0]
    out = np.zeros(n, dtype=bool)
    r2 = r * r
    for i in range(n):
        px, py, pz = points[i]
        c, _, _, _ = _closest_two_np(seeds, px, py, pz)
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            valid, dd = _foot_valid_d2_s(
                seeds, int(trip[e, 0]), int(trip[e, 1]), int(trip[e, 2]),
                base[e, 0], base[e, 1], base[e, 2],
                dirn[e, 0], dirn[e, 1], dirn[e, 2], px, py, pz)
            if valid and dd <= r2:
                out[i] = True
                break
    return out


def set_membership_m2(points, seeds, seg_a, seg_w, seg_ww, ptr, inc, r):
    n = points.shape[0]
    out = np.zeros(n, dtype=bool)
    r2 = r * r
    for i in range(n):
        px, py, pz = points[i]
        c, _, _, _ = _closest_two_np(seeds, px, py, pz)
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            t = ((px - seg_a[e, 0]) * seg_w[e, 0]
                 + (py - seg_a[e, 1]) * seg_w[e, 1]
                 + (pz - seg_a[e, 2]) * seg_w[e, 2]) / seg_ww[e]
            if t < 0.0 or t > 1.0:
                continue
            qx = seg_a[e, 0] + t * seg_w[e, 0]
            qy = seg_a[e, 1] + t * seg_w[e, 1]
            qz = seg_a[e, 2] + t * seg_w[e, 2]
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            if dx * dx + dy * dy + dz * dz <= r2:
                out[i] = True
                break
    return out


def set_distance_m1(points, seeds, base, dirn, trip, ptr, inc, r, edge_cap):
    n = points.shape[0]
    out = np.empty(n)
    for i in range(n):
        px, py, pz = points[i]
        c, _, _, d2s = _closest_two_np(seeds, px, py, pz)
        best2 = edge_cap * edge_cap
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            a = int(trip[e, 0])
            b = int(trip[e, 1])
            cc = int(trip[e, 2])
            bx, by, bz = base[e]
            ux, uy, uz = dirn[e]
            t = (px - bx) * ux + (py - by) * uy + (pz - bz) * uz
            qx = bx + t * ux
            qy = by + t * uy
            qz = bz + t * uz
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            if dx * dx + dy * dy + dz * dz >= best2:
                continue
            tlo, thi = _valid_interval_s(seeds, a, b, cc, bx, by, bz,
                                         ux, uy, uz)
            if tlo > thi:
                continue
            tc = min(max(t, tlo), thi)
            qx = bx + tc * ux
            qy = by + tc * uy
            qz = bz + tc * uz
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            dd = dx * dx + dy * dy + dz * dz
            if dd < best2:
                best2 = dd
        signed = np.sqrt(best2) - r
        capm = 0.5 * np.sqrt(d2s)
        out[i] = float(np.clip(signed, -capm, capm))
    return out


def set_distance_m2(points, seeds, seg_a, seg_w, seg_ww, ptr, inc, r,
                    edge_cap):
    n = points.shape[0]
    out = np.empty(n)
    for i in range(n):
        px, py, pz = points[i]
        c, _, _, d2s = _closest_two_np(seeds, px, py, pz)
        best2 = edge_cap * edge_cap
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            t = ((px - seg_a[e, 0]) * seg_w[e, 0]
                 + (py - seg_a[e, 1]) * seg_w[e, 1]
                 + (pz - seg_a[e, 2]) * seg_w[e, 2]) / seg_ww[e]
            t = min(max(t, 0.0), 1.0)
            qx = seg_a[e, 0] + t * seg_w[e, 0]
            qy = seg_a[e, 1] + t * seg_w[e, 1]
            qz = seg_a[e, 2] + t * seg_w[e, 2]
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            dd = dx * dx + dy * dy + dz * dz
            if dd < best2:
                best2 = dd
        signed = np.sqrt(best2) - r
        capm = 0.5 * np.sqrt(d2s)
        out[i] = float(np.clip(signed, -capm, capm))
    return out
