"""Deterministic foam seed placement: one seed per neighborhood cell.

A cell's seed is a pure function of (grid, cell index, salt), so any cell can
be generated on demand, including virtual cells outside the grid bounds (the
foam continues past the boundary rather than truncating the diagram there).
"""

from dataclasses import dataclass

import numpy as np

from .. import rng

# seedIds pack the (possibly negative) cell coordinates into 21 bits per axis.
_ID_BIAS = 1 << 20
_ID_SPAN = 1 << 21


def pack_cell_id(cells):
    """Stable int64 id for (n,3) or (3,) integer cell coordinates."""
    c = np.asarray(cells, dtype=np.int64)
    if np.any(np.abs(c) >= _ID_BIAS):
        raise ValueError("cell index out of packable range (+-2^20)")
    return ((c[..., 0] + _ID_BIAS) * _ID_SPAN + (c[..., 1] + _ID_BIAS)) \
        * _ID_SPAN + (c[..., 2] + _ID_BIAS)


def unpack_cell_id(ids):
    ids = np.asarray(ids, dtype=np.int64)
    cz = ids % _ID_SPAN - _ID_BIAS
    rest = ids // _ID_SPAN
    cy = rest % _ID_SPAN - _ID_BIAS
    cx = rest // _ID_SPAN - _ID_BIAS
    return np.stack([cx, cy, cz], axis=-1)


@dataclass(frozen=True)
class SeedSet:
    """The gathered neighborhood seeds around one center cell.

    ``points`` are ordered by ascending (cx, cy, cz) over the gather block, so
    local indices are reproducible; ``seed_ids`` are the packed global ids.
    """

    center_cell: tuple
    ring: int
    cells: np.ndarray      # (n, 3) int64
    points: np.ndarray     # (n, 3) float64
    seed_ids: np.ndarray   # (n,) int64

    @property
    def count(self):
        return self.points.shape[0]


def _seed_points_for_cells(grid, cells, salt):
    cells = np.asarray(cells, dtype=np.int64)
    keys = rng.cell_keys(salt, cells)
    u = np.stack([rng.uniforms(keys, rng.SEED_STREAM + axis)
                  for axis in range(3)], axis=-1)
    return grid.origin + (cells + u) * grid.cell_size


def seed_for_cell(grid, cell, salt):
    """Seed point and stable id for one cell (virtual cells allowed)."""
    cell = np.asarray(cell, dtype=np.int64).reshape(3)
    pt = _seed_points_for_cells(grid, cell[None, :], salt)[0]
    return pt, int(pack_cell_id(cell))


def gather_seeds(grid, cell, salt, ring=2):
    """All (2*ring+1)^3 seeds around ``cell`` in ascending cell order."""
    if ring < 1:
        raise ValueError("gather ring must be >= 1")
    cell = np.asarray(cell, dtype=np.int64).reshape(3)
    span = np.arange(-ring, ring + 1, dtype=np.int64)
    off = np.stack(np.meshgrid(span, span, span, indexing="ij"),
                   axis=-1).reshape(-1, 3)
    cells = cell[None, :] + off
    pts = _seed_points_for_cells(grid, cells, salt)
    return SeedSet(center_cell=tuple(int(v) for v in cell), ring=int(ring),
                   cells=cells, points=pts, seed_ids=pack_cell_id(cells))
