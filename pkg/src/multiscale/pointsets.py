"""Point set descriptors, neighborhood grouping, and per-cell generation.

Set queries take their points either as explicit coordinates or as a compact
parametric description (a regular sample grid, or stratified random points
with a fixed count per neighborhood cell). Grouping by neighborhood cell is
the entry step of every set query:

* explicit points are grouped by a single stable sort over flat cell ranks
  (single-threaded by design; the sort is the price of arbitrary input);
* regular grids are generated cell-by-cell from index ranges, with no global
  sort -- each cell's samples are enumerated directly;
* stratified points are regenerated per cell from the counter RNG, so a cell's
  points never have to be stored or sorted at all.

Within a group, points are ordered by ascending output slot; groups are
ordered by ascending cell rank. The generation paths and the sort path agree
exactly on this layout (fixed-salt tests pin it), which is what makes the
paths interchangeable for result purposes.
"""

from dataclasses import dataclass

import numpy as np

from . import _accel, rng
from ._accel import njit
from ._krng import cell_key, uniform
from .grid import NeighborhoodGrid, PointOutsideGridError


@dataclass(frozen=True)
class ExplicitPoints:
    """Concrete coordinates; slot i is point i."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "points", np.ascontiguousarray(self.points, dtype=np.float64).reshape(-1, 3)
        )

    @property
    def count(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class RegularGridPoints:
    """Samples at origin + index * spacing; slot = ix + nx*(iy + ny*iz)."""

    origin: tuple
    spacing: tuple
    counts: tuple

    @property
    def count(self):
        return int(np.prod(self.counts))


@dataclass(frozen=True)
class StratifiedPoints:
    """``per_cell`` uniform points in every cell of ``grid``; streams are keyed
    by (salt, cell), so any cell regenerates independently.
    Slot = cell_rank * per_cell + j."""

    grid: NeighborhoodGrid
    per_cell: int
    salt: int

    @property
    def count(self):
        return self.grid.cell_count * self.per_cell


PointSource = (ExplicitPoints, RegularGridPoints, StratifiedPoints)


class GroupedPoints:
    """CSR layout of points gathered into per-cell groups.

    Group g covers gathered rows ptr[g]:ptr[g+1] of ``points``/``slots`` and
    belongs to grid cell ``cells[g]``.
    """

    def __init__(self, cells, ptr, points, slots):
        self.cells = cells
        self.ptr = ptr
        self.points = points
        self.slots = slots

    @property
    def group_count(self):
        return self.cells.shape[0]

    @property
    def point_count(self):
        return self.points.shape[0]

    def group(self, g):
        a, b = self.ptr[g], self.ptr[g + 1]
        return self.cells[g], self.points[a:b], self.slots[a:b]

    def sizes(self):
        return np.diff(self.ptr)


def materialize(source):
    """Concrete (n, 3) coordinates of any source, in slot order."""
    if isinstance(source, ExplicitPoints):
        return source.points
    if isinstance(source, RegularGridPoints):
        o = np.asarray(source.origin, dtype=np.float64)
        sp = np.asarray(source.spacing, dtype=np.float64)
        nx, ny, nz = source.counts
        ix = o[0] + np.arange(nx) * sp[0]
        iy = o[1] + np.arange(ny) * sp[1]
        iz = o[2] + np.arange(nz) * sp[2]
        pts = np.empty((nz, ny, nx, 3))
        pts[..., 0] = ix[None, None, :]
        pts[..., 1] = iy[None, :, None]
        pts[..., 2] = iz[:, None, None]
        return pts.reshape(-1, 3)
    if isinstance(source, StratifiedPoints):
        pts, _ = _stratified_all_np(source)
        return pts
    raise TypeError(f"not a point source: {source!r}")


def source_count(source):
    return source.count


def group_for_grid(grid, source, alive=None, force_sort=False):
    """Group a source's (optionally alive-masked) points by ``grid`` cells.

    ``alive`` is a bool mask over output slots; dead slots are skipped. The
    parametric sources use their generation path unless ``force_sort``.
    """
    if isinstance(source, RegularGridPoints) and not force_sort:
        return _group_regular(grid, source, alive)
    if isinstance(source, StratifiedPoints) and not force_sort:
        return _group_stratified(grid, source, alive)
    pts = materialize(source)
    slots = np.arange(pts.shape[0], dtype=np.int64)
    if alive is not None:
        pts, slots = pts[alive], slots[alive]
    if isinstance(source, StratifiedPoints):
        # Ownership by generating cell (not cell_of): a sample that lands
        # exactly on a cell face through fp rounding stays with its cell.
        owners = np.repeat(np.arange(source.grid.cell_count, dtype=np.int64),
                           source.per_cell)
        if alive is not None:
            owners = owners[alive]
        if grid == source.grid:
            return _group_by_rank(grid, pts, slots, owners)
    return group_explicit(grid, pts, slots)


def group_explicit(grid, points, slots=None):
    """Sort-based grouping of arbitrary points (single stable sort)."""
    points = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3)
    if slots is None:
        slots = np.arange(points.shape[0], dtype=np.int64)
    cells = grid.cell_of(points)  # raises PointOutsideGridError
    ranks = grid.cell_rank(cells)
    return _group_by_rank(grid, points, slots, ranks)


def _group_by_rank(grid, points, slots, ranks):
    order = np.argsort(ranks, kind="stable")
    ranks = ranks[order]
    uniq, start = np.unique(ranks, return_index=True)
    ptr = np.empty(uniq.shape[0] + 1, dtype=np.int64)
    ptr[:-1] = start
    ptr[-1] = ranks.shape[0]
    cells = _ranks_to_cells(grid, uniq)
    return GroupedPoints(cells, ptr, np.ascontiguousarray(points[order]), slots[order])


def _ranks_to_cells(grid, ranks):
    nx, ny = int(grid.dims[0]), int(grid.dims[1])
    cells = np.empty((ranks.shape[0], 3), dtype=np.int64)
    cells[:, 0] = ranks % nx
    cells[:, 1] = (ranks // nx) % ny
    cells[:, 2] = ranks // (nx * ny)
    return cells


def group_by_clusters(grid, n_sub, points, slots=None):
    """Secondary strategy: group by (cell, subgrid cluster) instead of cell.

    Kept for benchmarking the finer-grained grouping; cluster rank is appended
    below the cell rank. Returns (GroupedPoints keyed by cluster-extended rank,
    cluster ids per group).
    """
    points = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3)
    if slots is None:
        slots = np.arange(points.shape[0], dtype=np.int64)
    cells = grid.cell_of(points)
    local = (points - grid.cell_low(cells)) / grid.cell_size
    cl = np.clip((local * n_sub).astype(np.int64), 0, n_sub - 1)
    crank = cl[:, 0] + n_sub * (cl[:, 1] + n_sub * cl[:, 2])
    nclust = n_sub**3
    ranks = grid.cell_rank(cells) * nclust + crank
    order = np.argsort(ranks, kind="stable")
    ranks_s = ranks[order]
    uniq, start = np.unique(ranks_s, return_index=True)
    ptr = np.empty(uniq.shape[0] + 1, dtype=np.int64)
    ptr[:-1] = start
    ptr[-1] = ranks_s.shape[0]
    cells_u = _ranks_to_cells(grid, uniq // nclust)
    grouped = GroupedPoints(cells_u, ptr, np.ascontiguousarray(points[order]), slots[order])
    return grouped, uniq % nclust


# ---------------------------------------------------------------------------
# regular-grid generation (no global sort)


def _group_regular(grid, source, alive):
    use_alive = alive is not None
    alive_arr = (
        np.ascontiguousarray(alive, dtype=np.bool_)
        if use_alive
        else np.zeros(0, dtype=np.bool_)
    )
    so = np.asarray(source.origin, dtype=np.float64)
    sp = np.asarray(source.spacing, dtype=np.float64)
    sc = np.asarray(source.counts, dtype=np.int64)
    if _accel.NUMBA_ENABLED:
        counts, pts, slots = _regular_groups_kern(
            grid.origin, grid.cell_size, grid.dims, grid.far_corner,
            so, sp, sc, alive_arr, use_alive,
        )
        expected = int(alive_arr.sum()) if use_alive else source.count
        if pts.shape[0] != expected:
            _raise_first_outside(grid, source, alive)
        nz = np.nonzero(counts)[0]
        ptr = np.zeros(nz.shape[0] + 1, dtype=np.int64)
        np.cumsum(counts[nz], out=ptr[1:])
        return GroupedPoints(_ranks_to_cells(grid, nz), ptr, pts, slots)
    pts = materialize(source)
    slots = np.arange(pts.shape[0], dtype=np.int64)
    if use_alive:
        pts, slots = pts[alive], slots[alive]
    return group_explicit(grid, pts, slots)


def _raise_first_outside(grid, source, alive):
    pts = materialize(source)
    slots = np.arange(pts.shape[0], dtype=np.int64)
    if alive is not None:
        pts, slots = pts[alive], slots[alive]
    out = np.any((pts < grid.origin) | (pts > grid.far_corner), axis=1)
    bad = int(slots[np.nonzero(out)[0][0]])
    raise PointOutsideGridError(
        f"sample slot {bad} lies outside grid domain [{grid.origin}, {grid.far_corner}]"
    )


@njit
def _regular_groups_kern(go, gcs, gdims, gfar, so, sp, sc, alive, use_alive):
    gnx, gny, gnz = gdims[0], gdims[1], gdims[2]
    nx, ny, nz = sc[0], sc[1], sc[2]
    ncell = gnx * gny * gnz
    counts = np.zeros(ncell, dtype=np.int64)

    rank = 0
    for cz in range(gnz):
        for cy in range(gny):
            for cx in range(gnx):
                n_in = 0
                # candidate index ranges, then exact membership filter
                x0, x1 = _axis_range(go[0] + cx * gcs[0], gcs[0], so[0], sp[0], nx)
                y0, y1 = _axis_range(go[1] + cy * gcs[1], gcs[1], so[1], sp[1], ny)
                z0, z1 = _axis_range(go[2] + cz * gcs[2], gcs[2], so[2], sp[2], nz)
                for iz in range(z0, z1):
                    if not _owns_axis(so[2] + iz * sp[2], go[2], gcs[2], gfar[2], gnz, cz):
                        continue
                    for iy in range(y0, y1):
                        if not _owns_axis(so[1] + iy * sp[1], go[1], gcs[1], gfar[1], gny, cy):
                            continue
                        for ix in range(x0, x1):
                            if not _owns_axis(so[0] + ix * sp[0], go[0], gcs[0], gfar[0], gnx, cx):
                                continue
                            if use_alive and not alive[ix + nx * (iy + ny * iz)]:
                                continue
                            n_in += 1
                counts[rank] = n_in
                rank += 1

    offsets = np.zeros(ncell, dtype=np.int64)
    acc = 0
    for c in range(ncell):
        offsets[c] = acc
        acc += counts[c]
    pts = np.empty((acc, 3), dtype=np.float64)
    slots = np.empty(acc, dtype=np.int64)

    rank = 0
    for cz in range(gnz):
        for cy in range(gny):
            for cx in range(gnx):
                if counts[rank] == 0:
                    rank += 1
                    continue
                x0, x1 = _axis_range(go[0] + cx * gcs[0], gcs[0], so[0], sp[0], nx)
                y0, y1 = _axis_range(go[1] + cy * gcs[1], gcs[1], so[1], sp[1], ny)
                z0, z1 = _axis_range(go[2] + cz * gcs[2], gcs[2], so[2], sp[2], nz)
                k = offsets[rank]
                for iz in range(z0, z1):
                    pz = so[2] + iz * sp[2]
                    if not _owns_axis(pz, go[2], gcs[2], gfar[2], gnz, cz):
                        continue
                    for iy in range(y0, y1):
                        py = so[1] + iy * sp[1]
                        if not _owns_axis(py, go[1], gcs[1], gfar[1], gny, cy):
                            continue
                        for ix in range(x0, x1):
                            px = so[0] + ix * sp[0]
                            if not _owns_axis(px, go[0], gcs[0], gfar[0], gnx, cx):
                                continue
                            slot = ix + nx * (iy + ny * iz)
                            if use_alive and not alive[slot]:
                                continue
                            pts[k, 0] = px
                            pts[k, 1] = py
                            pts[k, 2] = pz
                            slots[k] = slot
                            k += 1
                rank += 1
    return counts, pts, slots


@njit
def _axis_range(cell_lo, cell_sz, s_o, s_sp, n):
    i0 = int(np.floor((cell_lo - s_o) / s_sp)) - 1
    i1 = int(np.ceil((cell_lo + cell_sz - s_o) / s_sp)) + 2
    if i0 < 0:
        i0 = 0
    if i1 > n:
        i1 = n
    return i0, i1


@njit
def _owns_axis(p, o, cs, far, ncells, c):
    """Same assignment rule as NeighborhoodGrid.cell_of, one axis."""
    if p < o or p > far:
        return False
    k = int(np.floor((p - o) / cs))
    if k > ncells - 1:
        k = ncells - 1
    if k < 0:
        k = 0
    return k == c


# ---------------------------------------------------------------------------
# stratified generation


def _group_stratified(grid, source, alive):
    if grid != source.grid:
        return group_for_grid(grid, source, alive, force_sort=True)
    use_alive = alive is not None
    alive_arr = (
        np.ascontiguousarray(alive, dtype=np.bool_)
        if use_alive
        else np.zeros(0, dtype=np.bool_)
    )
    if _accel.NUMBA_ENABLED:
        counts, pts, slots = _stratified_groups_kern(
            grid.origin, grid.cell_size, grid.dims,
            np.uint64(source.salt & (2**64 - 1)), source.per_cell,
            alive_arr, use_alive,
        )
        nz = np.nonzero(counts)[0]
        ptr = np.zeros(nz.shape[0] + 1, dtype=np.int64)
        np.cumsum(counts[nz], out=ptr[1:])
        return GroupedPoints(_ranks_to_cells(grid, nz), ptr, pts, slots)
    pts, owners = _stratified_all_np(source)
    slots = np.arange(pts.shape[0], dtype=np.int64)
    if use_alive:
        pts, slots, owners = pts[alive], slots[alive], owners[alive]
    return _group_by_rank(grid, pts, slots, owners)


def _stratified_all_np(source):
    """All stratified points in slot order, plus generating-cell ranks."""
    g = source.grid
    k = source.per_cell
    ncell = g.cell_count
    ranks = np.arange(ncell, dtype=np.int64)
    cells = _ranks_to_cells(g, ranks)
    keys = rng.cell_keys(source.salt, cells)  # (ncell,)
    j = rng.STRATIFIED_STREAM + np.arange(3 * k, dtype=np.uint64)
    u = rng.uniforms(keys[:, None], j[None, :]).reshape(ncell, k, 3)
    lo = g.cell_low(cells)[:, None, :]
    pts = lo + u * g.cell_size[None, None, :]
    owners = np.repeat(ranks, k)
    return pts.reshape(-1, 3), owners


@njit
def _stratified_groups_kern(go, gcs, gdims, salt, per_cell, alive, use_alive):
    gnx, gny, gnz = gdims[0], gdims[1], gdims[2]
    ncell = gnx * gny * gnz
    counts = np.zeros(ncell, dtype=np.int64)
    if use_alive:
        for s in range(alive.shape[0]):
            if alive[s]:
                counts[s // per_cell] += 1
    else:
        counts[:] = per_cell
    total = 0
    for c in range(ncell):
        total += counts[c]
    pts = np.empty((total, 3), dtype=np.float64)
    slots = np.empty(total, dtype=np.int64)
    k = 0
    rank = 0
    for cz in range(gnz):
        for cy in range(gny):
            for cx in range(gnx):
                key = cell_key(salt, cx, cy, cz)
                for j in range(per_cell):
                    slot = rank * per_cell + j
                    if use_alive and not alive[slot]:
                        continue
                    base = 3 + 3 * j  # STRATIFIED_STREAM offset
                    pts[k, 0] = go[0] + cx * gcs[0] + uniform(key, base + 0) * gcs[0]
                    pts[k, 1] = go[1] + cy * gcs[1] + uniform(key, base + 1) * gcs[1]
                    pts[k, 2] = go[2] + cz * gcs[2] + uniform(key, base + 2) * gcs[2]
                    slots[k] = slot
                    k += 1
                rank += 1
    return counts, pts, slots
