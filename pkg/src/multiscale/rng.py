"""Counter-based deterministic random numbers.

Every randomized quantity in the library (foam seed positions, stratified
sample points) is a pure function of a user salt and a cell index, so any cell
can be generated independently, in any order, on any thread, with identical
results. The generator is splitmix64: a 64-bit key is derived by mixing the
salt with the three (possibly negative) cell coordinates, and the j-th output
of that cell's stream finalizes ``key + (j+1)*GOLDEN``.

This module is the canonical (numpy) implementation; the numba kernels carry
a line-for-line uint64 copy (see foam/_kern.py) and the two are pinned equal
by tests.
"""

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

# Stream layout within a cell: outputs 0..2 are reserved for the cell's foam
# seed coordinates; stratified sample j uses outputs 3+3j .. 5+3j.
SEED_STREAM = 0
STRATIFIED_STREAM = 3


def _mix(z):
    """Finalizer of splitmix64 on python ints (masked to 64 bits)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def cell_key(salt, cx, cy, cz):
    """64-bit stream key for one cell. Coordinates may be negative."""
    h = _mix((int(salt) + GOLDEN) & _MASK)
    h = _mix(h ^ (int(cx) & _MASK))
    h = _mix(h ^ (int(cy) & _MASK))
    h = _mix(h ^ (int(cz) & _MASK))
    return h


def uniform(key, j):
    """j-th uniform in [0, 1) of the stream ``key``."""
    z = _mix((int(key) + (j + 1) * GOLDEN) & _MASK)
    return (z >> 11) * 2.0**-53


def cell_keys(salt, cells):
    """Vectorized ``cell_key`` for an (n, 3) int array of cell coords."""
    cells = np.asarray(cells, dtype=np.int64)
    with np.errstate(over="ignore"):
        h = _mix_np(np.uint64((int(salt) + GOLDEN) & _MASK))
        h = np.broadcast_to(h, cells.shape[:-1]).copy()
        for axis in range(3):
            h = _mix_np(h ^ cells[..., axis].astype(np.uint64))
    return h


def uniforms(keys, j):
    """Vectorized ``uniform``: j may broadcast against keys."""
    keys = np.asarray(keys, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix_np(keys + (j + np.uint64(1)) * np.uint64(GOLDEN))
    return (z >> np.uint64(11)) * 2.0**-53


def _mix_np(z):
    z = np.uint64(z) if np.isscalar(z) or z.ndim == 0 else z
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))
