"""Jitted foam kernels.

Every geometric decision funnels through the scalar helpers at the top
(closest-seed scan, triplet bisector line, foot validity, valid interval), so
the naive path and the Method-1 path execute identical floating-point
sequences and their membership answers match bit for bit.  The numpy fallback
in _npq.py mirrors these expressions term for term.

Conventions: seeds is the (125, 3) gathered block in ascending cell order;
triplets are stored sorted ascending by local index; BIG marks "no constraint".
"""

import numpy as np

from .._accel import njit
from .._krng import cell_key, uniform

BIG = 1e30


@njit(cache=True)
def gather_into(out, salt, ccx, ccy, ccz, ring, ox, oy, oz, ex, ey, ez):
    i = 0
    for cx in range(ccx - ring, ccx + ring + 1):
        for cy in range(ccy - ring, ccy + ring + 1):
            for cz in range(ccz - ring, ccz + ring + 1):
                k = cell_key(salt, cx, cy, cz)
                out[i, 0] = ox + (cx + uniform(k, 0)) * ex
                out[i, 1] = oy + (cy + uniform(k, 1)) * ey
                out[i, 2] = oz + (cz + uniform(k, 2)) * ez
                i += 1


@njit(cache=True)
def closest_two(seeds, px, py, pz, d2):
    """Fill d2 with squared seed distances; return (argmin, best, second)."""
    c = 0
    best = BIG
    second = BIG
    for k in range(seeds.shape[0]):
        dx = px - seeds[k, 0]
        dy = py - seeds[k, 1]
        dz = pz - seeds[k, 2]
        v = dx * dx + dy * dy + dz * dz
        d2[k] = v
        if v < best:
            second = best
            best = v
            c = k
        elif v < second:
            second = v
    return c, best, second


@njit(cache=True)
def sort3(a, b, c):
    if b < a:
        a, b = b, a
    if c < b:
        b, c = c, b
    if b < a:
        a, b = b, a
    return a, b, c


@njit(cache=True)
def triplet_line(seeds, a, b, c):
    """Bisector line of sorted triplet (a,b,c): equidistant locus.

    Returns (ok, base xyz, unit direction xyz); ok False for collinear seeds.
    base is the triangle circumcenter, direction the unit triangle normal.
    """
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


@njit(cache=True)
def line_foot_d2(bx, by, bz, ux, uy, uz, px, py, pz):
    """Foot of the perpendicular from p onto the line (t, foot, |p-foot|^2)."""
    t = (px - bx) * ux + (py - by) * uy + (pz - bz) * uz
    qx = bx + t * ux
    qy = by + t * uy
    qz = bz + t * uz
    ddx = px - qx
    ddy = py - qy
    ddz = pz - qz
    return t, qx, qy, qz, ddx * ddx + ddy * ddy + ddz * ddz


@njit(cache=True)
def foot_ok(seeds, a, b, c, qx, qy, qz):
    """Voronoi validity of a foot point: no non-triplet seed is closer to it
    than the triplet's seeds are (the per-point "final check")."""
    dax = qx - seeds[a, 0]
    day = qy - seeds[a, 1]
    daz = qz - seeds[a, 2]
    ref = dax * dax + day * day + daz * daz
    for k in range(seeds.shape[0]):
        if k == a or k == b or k == c:
            continue
        dx = qx - seeds[k, 0]
        dy = qy - seeds[k, 1]
        dz = qz - seeds[k, 2]
        if dx * dx + dy * dy + dz * dz < ref:
            return False
    return True


@njit(cache=True)
def valid_interval(seeds, a, b, c, bx, by, bz, ux, uy, uz, tlo, thi):
    """Line-parameter interval where the triplet is the closest seed set,
    intersected with the starting window [tlo, thi].

    Each other seed contributes a half-line constraint c0 + c1*t <= 0; the
    interval is their intersection (tlo > thi when empty). This is the same
    predicate foot_ok evaluates at a single t. Queries seed the window with
    (-BIG, BIG); the Method-1 cull seeds it with the cell box slab so doomed
    candidates exit at the first excluding constraint.
    """
    dax = bx - seeds[a, 0]
    day = by - seeds[a, 1]
    daz = bz - seeds[a, 2]
    ref = dax * dax + day * day + daz * daz
    for k in range(seeds.shape[0]):
        if k == a or k == b or k == c:
            continue
        dkx = bx - seeds[k, 0]
        dky = by - seeds[k, 1]
        dkz = bz - seeds[k, 2]
        c0 = ref - (dkx * dkx + dky * dky + dkz * dkz)
        c1 = 2.0 * (ux * (seeds[k, 0] - seeds[a, 0])
                    + uy * (seeds[k, 1] - seeds[a, 1])
                    + uz * (seeds[k, 2] - seeds[a, 2]))
        if c1 > 0.0:
            tt = -c0 / c1
            if tt < thi:
                thi = tt
        elif c1 < 0.0:
            tt = -c0 / c1
            if tt > tlo:
                tlo = tt
        elif c0 > 0.0:
            return 1.0, -1.0
        if tlo > thi:
            return tlo, thi
    return tlo, thi


# ---------------------------------------------------------------------------
# naive per-point queries
# ---------------------------------------------------------------------------

@njit(cache=True)
def naive_membership_one(seeds, d2, r2, px, py, pz):
    """One flat visit per seed pair: quick bisector-plane rejects, then the
    full line / foot / validity test for survivors. Inside on the first
    triplet whose valid foot lies within the beam radius."""
    n = seeds.shape[0]
    c, d2c, _ = closest_two(seeds, px, py, pz, d2)
    scx = seeds[c, 0]
    scy = seeds[c, 1]
    scz = seeds[c, 2]
    fourr2 = 4.0 * r2
    for a in range(n):
        if a == c:
            continue
        for b in range(a + 1, n):
            if b == c:
                continue
            # p farther than r from the plane holding the pair's line: skip
            da = d2[a] - d2c
            sx = seeds[a, 0] - scx
            sy = seeds[a, 1] - scy
            sz = seeds[a, 2] - scz
            if da * da > fourr2 * (sx * sx + sy * sy + sz * sz):
                continue
            db = d2[b] - d2c
            tx = seeds[b, 0] - scx
            ty = seeds[b, 1] - scy
            tz = seeds[b, 2] - scz
            if db * db > fourr2 * (tx * tx + ty * ty + tz * tz):
                continue
            aa, bb, cc = sort3(c, a, b)
            ok, bx, by, bz, ux, uy, uz = triplet_line(seeds, aa, bb, cc)
            if not ok:
                continue
            t, qx, qy, qz, dd = line_foot_d2(bx, by, bz, ux, uy, uz,
                                             px, py, pz)
            if dd <= r2 and foot_ok(seeds, aa, bb, cc, qx, qy, qz):
                return True
    return False


@njit(cache=True)
def naive_distance_one(seeds, d2, r, edge_cap, px, py, pz):
    """Conservative signed distance (negative inside).

    Same flat pair loop as membership with the plane rejects taken against
    the current best instead of the beam radius; minimizes the
    interval-clamped foot distance, capped at edge_cap (= beamRadius + half
    cell edge), then clamps the magnitude to half the distance to the
    second-closest seed.
    """
    n = seeds.shape[0]
    c, d2c, d2s = closest_two(seeds, px, py, pz, d2)
    scx = seeds[c, 0]
    scy = seeds[c, 1]
    scz = seeds[c, 2]
    best2 = edge_cap * edge_cap
    for a in range(n):
        if a == c:
            continue
        for b in range(a + 1, n):
            if b == c:
                continue
            da = d2[a] - d2c
            sx = seeds[a, 0] - scx
            sy = seeds[a, 1] - scy
            sz = seeds[a, 2] - scz
            if da * da > 4.0 * best2 * (sx * sx + sy * sy + sz * sz):
                continue
            db = d2[b] - d2c
            tx = seeds[b, 0] - scx
            ty = seeds[b, 1] - scy
            tz = seeds[b, 2] - scz
            if db * db > 4.0 * best2 * (tx * tx + ty * ty + tz * tz):
                continue
            aa, bb, cc = sort3(c, a, b)
            ok, bx, by, bz, ux, uy, uz = triplet_line(seeds, aa, bb, cc)
            if not ok:
                continue
            t, qx, qy, qz, dline2 = line_foot_d2(bx, by, bz, ux, uy, uz,
                                                 px, py, pz)
            if dline2 >= best2:
                continue
            tlo, thi = valid_interval(seeds, aa, bb, cc, bx, by, bz,
                                      ux, uy, uz, -BIG, BIG)
            if tlo > thi:
                continue
            tc = t
            if tc < tlo:
                tc = tlo
            elif tc > thi:
                tc = thi
            qx = bx + tc * ux
            qy = by + tc * uy
            qz = bz + tc * uz
            dx = px - qx
            dy = py - qy
            dz = pz - qz
            dseg2 = dx * dx + dy * dy + dz * dz
            if dseg2 < best2:
                best2 = dseg2
    signed = np.sqrt(best2) - r
    capm = 0.5 * np.sqrt(d2s)
    if signed > capm:
        signed = capm
    elif signed < -capm:
        signed = -capm
    return signed


@njit(cache=True)
def naive_membership_batch(points, salt, ring, ox, oy, oz, ex, ey, ez, r):
    n = points.shape[0]
    nn = 2 * ring + 1
    nn = nn * nn * nn
    out = np.zeros(n, np.bool_)
    seeds = np.empty((nn, 3))
    d2 = np.empty(nn)
    r2 = r * r
    for i in range(n):
        px = points[i, 0]
        py = points[i, 1]
        pz = points[i, 2]
        cx = np.int64(np.floor((px - ox) / ex))
        cy = np.int64(np.floor((py - oy) / ey))
        cz = np.int64(np.floor((pz - oz) / ez))
        gather_into(seeds, salt, cx, cy, cz, ring, ox, oy, oz, ex, ey, ez)
        out[i] = naive_membership_one(seeds, d2, r2, px, py, pz)
    return out


@njit(cache=True)
def naive_distance_batch(points, salt, ring, ox, oy, oz, ex, ey, ez, r,
                         edge_cap):
    n = points.shape[0]
    nn = 2 * ring + 1
    nn = nn * nn * nn
    out = np.empty(n)
    seeds = np.empty((nn, 3))
    d2 = np.empty(nn)
    for i in range(n):
        px = points[i, 0]
        py = points[i, 1]
        pz = points[i, 2]
        cx = np.int64(np.floor((px - ox) / ex))
        cy = np.int64(np.floor((py - oy) / ey))
        cz = np.int64(np.floor((pz - oz) / ez))
        gather_into(seeds, salt, cx, cy, cz, ring, ox, oy, oz, ex, ey, ez)
        out[i] = naive_distance_one(seeds, d2, r, edge_cap, px, py, pz)
    return out


# ---------------------------------------------------------------------------
# Method 1 precompute: candidate bisector lines culled against the cell box
# ---------------------------------------------------------------------------

@njit(cache=True)
def line_box_interval(bx, by, bz, ux, uy, uz, lox, loy, loz, hix, hiy, hiz):
    """Slab test: the line-parameter window inside the box, or hit=False."""
    t0 = -BIG
    t1 = BIG
    if ux == 0.0:
        if bx < lox or bx > hix:
            return False, 0.0, 0.0
    else:
        u = (lox - bx) / ux
        v = (hix - bx) / ux
        if u > v:
            u, v = v, u
        if u > t0:
            t0 = u
        if v < t1:
            t1 = v
    if uy == 0.0:
        if by < loy or by > hiy:
            return False, 0.0, 0.0
    else:
        u = (loy - by) / uy
        v = (hiy - by) / uy
        if u > v:
            u, v = v, u
        if u > t0:
            t0 = u
        if v < t1:
            t1 = v
    if uz == 0.0:
        if bz < loz or bz > hiz:
            return False, 0.0, 0.0
    else:
        u = (loz - bz) / uz
        v = (hiz - bz) / uz
        if u > v:
            u, v = v, u
        if u > t0:
            t0 = u
        if v < t1:
            t1 = v
    return t0 <= t1, t0, t1


@njit(cache=True)
def _csr_by_seed(trip, nseeds):
    ne = trip.shape[0]
    ptr = np.zeros(nseeds + 1, np.int64)
    for e in range(ne):
        for s in range(3):
            ptr[trip[e, s] + 1] += 1
    for k in range(nseeds):
        ptr[k + 1] += ptr[k]
    inc = np.empty(3 * ne, np.int64)
    cur = ptr.copy()
    for e in range(ne):
        for s in range(3):
            v = trip[e, s]
            inc[cur[v]] = e
            cur[v] += 1
    return ptr, inc


@njit(cache=True)
def precompute_m1(seeds, lox, loy, loz, hix, hiy, hiz):
    """Candidate edges for one cell: every 3-subset whose Voronoi edge (the
    valid interval of its bisector line) overlaps the inflated box.

    Enumeration is prefiltered by pairwise bisector planes (an edge lies in
    all three planes, so a plane missing the box kills every triplet holding
    that pair), then candidates whose valid interval misses the box slab
    window are discarded: an empty valid interval can never validate for any
    query point, and a valid foot relevant to an in-cell point always lies
    inside the box window, so the cull is exact. Per-point validity is still
    checked at query time.

    Returns (base, dirn, trip, ptr, inc): edge geometry plus a CSR adjacency
    from local seed index to incident edge indices.
    """
    n = seeds.shape[0]
    ctrx = 0.5 * (lox + hix)
    ctry = 0.5 * (loy + hiy)
    ctrz = 0.5 * (loz + hiz)
    hx = 0.5 * (hix - lox)
    hy = 0.5 * (hiy - loy)
    hz = 0.5 * (hiz - loz)
    pairok = np.zeros((n, n), np.bool_)
    degf = np.zeros(n, np.int32)
    adjf = np.empty((n, n), np.int32)
    for i in range(n):
        for j in range(i + 1, n):
            nxv = seeds[j, 0] - seeds[i, 0]
            nyv = seeds[j, 1] - seeds[i, 1]
            nzv = seeds[j, 2] - seeds[i, 2]
            midx = 0.5 * (seeds[i, 0] + seeds[j, 0])
            midy = 0.5 * (seeds[i, 1] + seeds[j, 1])
            midz = 0.5 * (seeds[i, 2] + seeds[j, 2])
            s = (ctrx - midx) * nxv + (ctry - midy) * nyv + (ctrz - midz) * nzv
            e = hx * np.abs(nxv) + hy * np.abs(nyv) + hz * np.abs(nzv)
            if s * s <= e * e:
                pairok[i, j] = True
                pairok[j, i] = True
                adjf[i, degf[i]] = j
                degf[i] += 1
    cap = 2048
    base = np.empty((cap, 3))
    dirn = np.empty((cap, 3))
    trip = np.empty((cap, 3), np.int32)
    ne = 0
    for i in range(n):
        di = degf[i]
        for jj in range(di):
            j = adjf[i, jj]
            for kk in range(jj + 1, di):
                k = adjf[i, kk]
                if not pairok[j, k]:
                    continue
                ok, bx, by, bz, ux, uy, uz = triplet_line(seeds, i, j, k)
                if not ok:
                    continue
                hit, t0, t1 = line_box_interval(bx, by, bz, ux, uy, uz,
                                                lox, loy, loz, hix, hiy, hiz)
                if not hit:
                    continue
                tlo, thi = valid_interval(seeds, i, j, k, bx, by, bz,
                                          ux, uy, uz, t0, t1)
                if tlo > thi:
                    continue
                if ne == cap:
                    cap *= 2
                    nb = np.empty((cap, 3))
                    nd = np.empty((cap, 3))
                    nt = np.empty((cap, 3), np.int32)
                    nb[:ne] = base
                    nd[:ne] = dirn
                    nt[:ne] = trip
                    base = nb
                    dirn = nd
                    trip = nt
                base[ne, 0] = bx
                base[ne, 1] = by
                base[ne, 2] = bz
                dirn[ne, 0] = ux
                dirn[ne, 1] = uy
                dirn[ne, 2] = uz
                trip[ne, 0] = i
                trip[ne, 1] = j
                trip[ne, 2] = k
                ne += 1
    base = base[:ne].copy()
    dirn = dirn[:ne].copy()
    trip = trip[:ne].copy()
    ptr, inc = _csr_by_seed(trip, n)
    return base, dirn, trip, ptr, inc


# ---------------------------------------------------------------------------
# Bowyer-Watson Delaunay + Method 2 precompute
# ---------------------------------------------------------------------------

@njit(cache=True)
def _tet_circumsphere(verts, a, b, c, d):
    ax = verts[a, 0]
    ay = verts[a, 1]
    az = verts[a, 2]
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
    if np.abs(den) < 1e-30:
        # degenerate sliver: poison it so any later insertion retriangulates
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


@njit(cache=True)
def sort4(a, b, c, d):
    if b < a:
        a, b = b, a
    if d < c:
        c, d = d, c
    if c < a:
        a, c = c, a
    if d < b:
        b, d = d, b
    if c < b:
        b, c = c, b
    return a, b, c, d


@njit(cache=True)
def delaunay_unit(pts, eps):
    """Incremental Bowyer-Watson over points assumed near the unit cube.

    Points within eps of a circumsphere count as inside it (favoring
    retriangulation; this is the deterministic cosphericity rule). Dead slots
    are recycled LIFO so the per-insertion scan stays short. Returns
    (tets, circ, rad): alive non-super tetrahedra in slot order, vertex ids
    sorted ascending per row, circumspheres in the same coordinates.
    """
    n = pts.shape[0]
    nv = n + 4
    verts = np.empty((nv, 3))
    verts[:n] = pts
    big = 100.0
    verts[n, 0] = -big
    verts[n, 1] = -big
    verts[n, 2] = -big
    verts[n + 1, 0] = 3.0 * big
    verts[n + 1, 1] = -big
    verts[n + 1, 2] = -big
    verts[n + 2, 0] = -big
    verts[n + 2, 1] = 3.0 * big
    verts[n + 2, 2] = -big
    verts[n + 3, 0] = -big
    verts[n + 3, 1] = -big
    verts[n + 3, 2] = 3.0 * big

    cap = 4096
    tets = np.empty((cap, 4), np.int32)
    circ = np.empty((cap, 3))
    rad = np.empty(cap)
    reps2 = np.empty(cap)       # (rad + eps)^2, the insertion test bound
    alive = np.zeros(cap, np.bool_)
    free = np.empty(cap, np.int32)
    nfree = 0

    tets[0, 0] = n
    tets[0, 1] = n + 1
    tets[0, 2] = n + 2
    tets[0, 3] = n + 3
    cx, cy, cz, rr = _tet_circumsphere(verts, n, n + 1, n + 2, n + 3)
    circ[0, 0] = cx
    circ[0, 1] = cy
    circ[0, 2] = cz
    rad[0] = rr
    reps2[0] = (rr + eps) * (rr + eps)
    alive[0] = True
    ntet = 1

    fcap = 512
    fkey = np.empty(fcap, np.int64)
    fv = np.empty((fcap, 3), np.int32)
    order = np.empty(fcap, np.int32)
    badbuf = np.empty(1024, np.int32)

    for p in range(n):
        px = verts[p, 0]
        py = verts[p, 1]
        pz = verts[p, 2]
        nbad = 0
        for t in range(ntet):
            if not alive[t]:
                continue
            dx = px - circ[t, 0]
            dy = py - circ[t, 1]
            dz = pz - circ[t, 2]
            if dx * dx + dy * dy + dz * dz < reps2[t]:
                if nbad == badbuf.shape[0]:
                    nb = np.empty(badbuf.shape[0] * 2, np.int32)
                    nb[:nbad] = badbuf
                    badbuf = nb
                badbuf[nbad] = t
                nbad += 1
        nf = 0
        for bi in range(nbad):
            t = badbuf[bi]
            alive[t] = False
            if nfree == free.shape[0]:
                nfr = np.empty(free.shape[0] * 2, np.int32)
                nfr[:nfree] = free
                free = nfr
            free[nfree] = t
            nfree += 1
            for f in range(4):
                # face opposite vertex slot f; row is sorted so the face
                # triple stays ascending
                if f == 0:
                    v0 = tets[t, 1]
                    v1 = tets[t, 2]
                    v2 = tets[t, 3]
                elif f == 1:
                    v0 = tets[t, 0]
                    v1 = tets[t, 2]
                    v2 = tets[t, 3]
                elif f == 2:
                    v0 = tets[t, 0]
                    v1 = tets[t, 1]
                    v2 = tets[t, 3]
                else:
                    v0 = tets[t, 0]
                    v1 = tets[t, 1]
                    v2 = tets[t, 2]
                if nf == fcap:
                    fcap *= 2
                    nk = np.empty(fcap, np.int64)
                    nfv = np.empty((fcap, 3), np.int32)
                    no = np.empty(fcap, np.int32)
                    nk[:nf] = fkey[:nf]
                    nfv[:nf] = fv[:nf]
                    fkey = nk
                    fv = nfv
                    order = no
                fkey[nf] = (np.int64(v0) * nv + v1) * nv + v2
                fv[nf, 0] = v0
                fv[nf, 1] = v1
                fv[nf, 2] = v2
                nf += 1
        for a0 in range(nf):
            order[a0] = a0
        for a0 in range(1, nf):
            ov = order[a0]
            key = fkey[ov]
            b0 = a0 - 1
            while b0 >= 0 and fkey[order[b0]] > key:
                order[b0 + 1] = order[b0]
                b0 -= 1
            order[b0 + 1] = ov
        i = 0
        while i < nf:
            j = i + 1
            while j < nf and fkey[order[j]] == fkey[order[i]]:
                j += 1
            if j - i == 1:
                f = order[i]
                a, b, c, d = sort4(fv[f, 0], fv[f, 1], fv[f, 2], np.int32(p))
                if nfree > 0:
                    slot = free[nfree - 1]
                    nfree -= 1
                else:
                    if ntet == cap:
                        cap *= 2
                        nt = np.empty((cap, 4), np.int32)
                        nc = np.empty((cap, 3))
                        nr = np.empty(cap)
                        nr2 = np.empty(cap)
                        na = np.zeros(cap, np.bool_)
                        nt[:ntet] = tets
                        nc[:ntet] = circ
                        nr[:ntet] = rad
                        nr2[:ntet] = reps2
                        na[:ntet] = alive[:ntet]
                        tets = nt
                        circ = nc
                        rad = nr
                        reps2 = nr2
                        alive = na
                    slot = ntet
                    ntet += 1
                tets[slot, 0] = a
                tets[slot, 1] = b
                tets[slot, 2] = c
                tets[slot, 3] = d
                cx, cy, cz, rr = _tet_circumsphere(verts, a, b, c, d)
                circ[slot, 0] = cx
                circ[slot, 1] = cy
                circ[slot, 2] = cz
                rad[slot] = rr
                reps2[slot] = (rr + eps) * (rr + eps)
                alive[slot] = True
            i = j
    # compact alive tets without super vertices (ids >= n)
    count = 0
    for t in range(ntet):
        if alive[t] and tets[t, 3] < n:
            count += 1
    otets = np.empty((count, 4), np.int32)
    ocirc = np.empty((count, 3))
    orad = np.empty(count)
    w = 0
    for t in range(ntet):
        if alive[t] and tets[t, 3] < n:
            otets[w] = tets[t]
            ocirc[w] = circ[t]
            orad[w] = rad[t]
            w += 1
    return otets, ocirc, orad


@njit(cache=True)
def segment_meets_box(ax, ay, az, bx, by, bz,
                      lox, loy, loz, hix, hiy, hiz):
    t0 = 0.0
    t1 = 1.0
    dx = bx - ax
    if dx == 0.0:
        if ax < lox or ax > hix:
            return False
    else:
        u = (lox - ax) / dx
        v = (hix - ax) / dx
        if u > v:
            u, v = v, u
        if u > t0:
            t0 = u
        if v < t1:
            t1 = v
    dy = by - ay
    if dy == 0.0:
        if ay < loy or ay > hiy:
            return False
    else:
        u = (loy - ay) / dy
        v = (hiy - ay) / dy
        if u > v:
            u, v = v, u
        if u > t0:
            t0 = u
        if v < t1:
            t1 = v
    dz = bz - az
    if dz == 0.0:
        if az < loz or az > hiz:
            return False
    else:
        u = (loz - az) / dz
        v = (hiz - az) / dz
        if u > v:
            u, v = v, u
        if u > t0:
            t0 = u
        if v < t1:
            t1 = v
    return t0 <= t1


@njit(cache=True)
def precompute_m2(tets, circ, nseeds, lox, loy, loz, hix, hiy, hiz):
    """Finite Voronoi edges from the tetrahedralization for one cell.

    Matches interior faces (shared by exactly two tetrahedra) by sorting
    packed face keys; each match yields the segment between the two
    circumcenters, annotated with the face triplet, culled against the
    inflated box. Returns (seg_a, seg_w, seg_ww, trip, ptr, inc).
    """
    nt = tets.shape[0]
    nf = 4 * nt
    fkey = np.empty(nf, np.int64)
    ftet = np.empty(nf, np.int32)
    fv = np.empty((nf, 3), np.int32)
    w = 0
    for t in range(nt):
        for f in range(4):
            if f == 0:
                v0 = tets[t, 1]
                v1 = tets[t, 2]
                v2 = tets[t, 3]
            elif f == 1:
                v0 = tets[t, 0]
                v1 = tets[t, 2]
                v2 = tets[t, 3]
            elif f == 2:
                v0 = tets[t, 0]
                v1 = tets[t, 1]
                v2 = tets[t, 3]
            else:
                v0 = tets[t, 0]
                v1 = tets[t, 1]
                v2 = tets[t, 2]
            fkey[w] = (np.int64(v0) * nseeds + v1) * nseeds + v2
            ftet[w] = t
            fv[w, 0] = v0
            fv[w, 1] = v1
            fv[w, 2] = v2
            w += 1
    order = np.argsort(fkey)
    cap = 1024
    seg_a = np.empty((cap, 3))
    seg_w = np.empty((cap, 3))
    seg_ww = np.empty(cap)
    trip = np.empty((cap, 3), np.int32)
    ne = 0
    i = 0
    while i < nf:
        j = i + 1
        while j < nf and fkey[order[j]] == fkey[order[i]]:
            j += 1
        if j - i == 2:
            t0 = ftet[order[i]]
            t1 = ftet[order[i + 1]]
            if t1 < t0:
                t0, t1 = t1, t0
            ax = circ[t0, 0]
            ay = circ[t0, 1]
            az = circ[t0, 2]
            bx = circ[t1, 0]
            by = circ[t1, 1]
            bz = circ[t1, 2]
            if segment_meets_box(ax, ay, az, bx, by, bz,
                                 lox, loy, loz, hix, hiy, hiz):
                if ne == cap:
                    cap *= 2
                    na = np.empty((cap, 3))
                    nw = np.empty((cap, 3))
                    nww = np.empty(cap)
                    ntr = np.empty((cap, 3), np.int32)
                    na[:ne] = seg_a
                    nw[:ne] = seg_w
                    nww[:ne] = seg_ww
                    ntr[:ne] = trip
                    seg_a = na
                    seg_w = nw
                    seg_ww = nww
                    trip = ntr
                f = order[i]
                seg_a[ne, 0] = ax
                seg_a[ne, 1] = ay
                seg_a[ne, 2] = az
                wx = bx - ax
                wy = by - ay
                wz = bz - az
                seg_w[ne, 0] = wx
                seg_w[ne, 1] = wy
                seg_w[ne, 2] = wz
                seg_ww[ne] = wx * wx + wy * wy + wz * wz
                trip[ne, 0] = fv[f, 0]
                trip[ne, 1] = fv[f, 1]
                trip[ne, 2] = fv[f, 2]
                ne += 1
        i = j
    seg_a = seg_a[:ne].copy()
    seg_w = seg_w[:ne].copy()
    seg_ww = seg_ww[:ne].copy()
    trip = trip[:ne].copy()
    ptr, inc = _csr_by_seed(trip, nseeds)
    return seg_a, seg_w, seg_ww, trip, ptr, inc


# ---------------------------------------------------------------------------
# set queries against a cell's precomputed edges
# ---------------------------------------------------------------------------

@njit(cache=True)
def set_membership_m1(points, seeds, base, dirn, trip, ptr, inc, r):
    n = points.shape[0]
    out = np.zeros(n, np.bool_)
    d2 = np.empty(seeds.shape[0])
    r2 = r * r
    for i in range(n):
        px = points[i, 0]
        py = points[i, 1]
        pz = points[i, 2]
        c, _, _ = closest_two(seeds, px, py, pz, d2)
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            t, qx, qy, qz, dd = line_foot_d2(
                base[e, 0], base[e, 1], base[e, 2],
                dirn[e, 0], dirn[e, 1], dirn[e, 2], px, py, pz)
            if dd <= r2 and foot_ok(seeds, trip[e, 0], trip[e, 1],
                                    trip[e, 2], qx, qy, qz):
                out[i] = True
                break
    return out


@njit(cache=True)
def set_membership_m2(points, seeds, seg_a, seg_w, seg_ww, ptr, inc, r):
    n = points.shape[0]
    out = np.zeros(n, np.bool_)
    d2 = np.empty(seeds.shape[0])
    r2 = r * r
    for i in range(n):
        px = points[i, 0]
        py = points[i, 1]
        pz = points[i, 2]
        c, _, _ = closest_two(seeds, px, py, pz, d2)
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


@njit(cache=True)
def set_distance_m1(points, seeds, base, dirn, trip, ptr, inc, r, edge_cap):
    n = points.shape[0]
    out = np.empty(n)
    d2 = np.empty(seeds.shape[0])
    for i in range(n):
        px = points[i, 0]
        py = points[i, 1]
        pz = points[i, 2]
        c, _, d2s = closest_two(seeds, px, py, pz, d2)
        best2 = edge_cap * edge_cap
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            a = trip[e, 0]
            b = trip[e, 1]
            cc = trip[e, 2]
            bx = base[e, 0]
            by = base[e, 1]
            bz = base[e, 2]
            ux = dirn[e, 0]
            uy = dirn[e, 1]
            uz = dirn[e, 2]
            t, qx, qy, qz, dline2 = line_foot_d2(bx, by, bz, ux, uy, uz,
                                                 px, py, pz)
            if dline2 >= best2:
                continue
            tlo, thi = valid_interval(seeds, a, b, cc, bx, by, bz,
                                      ux, uy, uz, -BIG, BIG)
            if tlo > thi:
                continue
            tc = t
            if tc < tlo:
                tc = tlo
            elif tc > thi:
                tc = thi
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
        if signed > capm:
            signed = capm
        elif signed < -capm:
            signed = -capm
        out[i] = signed
    return out


@njit(cache=True)
def set_distance_m2(points, seeds, seg_a, seg_w, seg_ww, ptr, inc, r,
                    edge_cap):
    n = points.shape[0]
    out = np.empty(n)
    d2 = np.empty(seeds.shape[0])
    for i in range(n):
        px = points[i, 0]
        py = points[i, 1]
        pz = points[i, 2]
        c, _, d2s = closest_two(seeds, px, py, pz, d2)
        best2 = edge_cap * edge_cap
        for ei in range(ptr[c], ptr[c + 1]):
            e = inc[ei]
            t = ((px - seg_a[e, 0]) * seg_w[e, 0]
                 + (py - seg_a[e, 1]) * seg_w[e, 1]
                 + (pz - seg_a[e, 2]) * seg_w[e, 2]) / seg_ww[e]
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
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
        if signed > capm:
            signed = capm
        elif signed < -capm:
            signed = -capm
        out[i] = signed
    return out
