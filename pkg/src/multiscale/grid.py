"""Axis-aligned neighborhood grids.

A neighborhood grid partitions a box into ``dims`` cells of uniform
``cell_size``. Cell assignment is ``floor((p - origin) / cell_size)`` with two
boundary rules: a point on an interior face belongs to the higher-index cell
(the natural floor behavior), and a point on the far boundary of the grid is
clamped into the last cell so the domain is closed.
"""

import numpy as np


class PointOutsideGridError(ValueError):
    """A query point lies outside the grid's closed domain."""


class NeighborhoodGrid:
    def __init__(self, origin, cell_size, dims):
        self.origin = np.asarray(origin, dtype=np.float64).reshape(3).copy()
        self.cell_size = np.broadcast_to(
            np.asarray(cell_size, dtype=np.float64), (3,)).copy()
        self.dims = np.asarray(dims, dtype=np.int64).reshape(3).copy()
        if not np.all(self.cell_size > 0):
            raise ValueError(f"cell_size must be positive, got {self.cell_size}")
        if not np.all(self.dims >= 1):
            raise ValueError(f"dims must be >= 1, got {self.dims}")

    @property
    def far_corner(self):
        return self.origin + self.dims * self.cell_size

    @property
    def cell_edge(self):
        """Smallest cell extent; the scale's resolution for length cutoffs."""
        return float(np.min(self.cell_size))

    @property
    def cell_count(self):
        return int(np.prod(self.dims))

    def cell_of(self, points):
        """(n, 3) points -> (n, 3) int64 cell coords; raises if any point is
        outside the closed domain, naming the first offending index."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        below = pts < self.origin
        above = pts > self.far_corner
        if below.any() or above.any():
            bad = int(np.nonzero(below.any(axis=1) | above.any(axis=1))[0][0])
            raise PointOutsideGridError(
                f"point index {bad} at {pts[bad]} is outside grid domain "
                f"[{self.origin}, {self.far_corner}]"
            )
        cells = np.floor((pts - self.origin) / self.cell_size).astype(np.int64)
        np.minimum(cells, self.dims - 1, out=cells)  # far-boundary clamp
        np.maximum(cells, 0, out=cells)
        return cells

    def cell_low(self, cells):
        return self.origin + np.asarray(cells, dtype=np.float64) * self.cell_size

    def cell_high(self, cells):
        return self.origin + (np.asarray(cells, dtype=np.float64) + 1.0) * self.cell_size

    def cell_rank(self, cells):
        """Flat rank with x fastest: rank = cx + dims_x*(cy + dims_y*cz)."""
        cells = np.asarray(cells, dtype=np.int64)
        nx, ny = int(self.dims[0]), int(self.dims[1])
        return cells[..., 0] + nx * (cells[..., 1] + ny * cells[..., 2])

    def __eq__(self, other):
        return (
            isinstance(other, NeighborhoodGrid)
            and np.array_equal(self.origin, other.origin)
            and np.array_equal(self.cell_size, other.cell_size)
            and np.array_equal(self.dims, other.dims)
        )

    def __hash__(self):
        return hash((self.origin.tobytes(), self.cell_size.tobytes(), self.dims.tobytes()))

    def __repr__(self):
        return (
            f"NeighborhoodGrid(origin={self.origin.tolist()}, "
            f"cell_size={self.cell_size.tolist()}, dims={self.dims.tolist()})"
        )
