"""Numba twin of the splitmix64 generator in rng.py.

Kept line-for-line parallel with the canonical numpy implementation; tests pin
the two equal over salts, negative cells and stream indices. These functions
assume numba's C-style uint64 semantics and are only called from jitted code
(the numpy-path dispatchers use rng.py instead).
"""

import numpy as np

from ._accel import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit
def mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit
def cell_key(salt, cx, cy, cz):
    h = mix(salt + GOLDEN)
    h = mix(h ^ np.uint64(cx))
    h = mix(h ^ np.uint64(cy))
    h = mix(h ^ np.uint64(cz))
    return h


@njit
def uniform(key, j):
    z = mix(key + np.uint64(j + 1) * GOLDEN)
    return (z >> np.uint64(11)) * 2.0**-53
