"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

from collections import deque

import numpy as np

from vanamo.geometry.grid import CellSet

# Sentinel for cells with no path to a source; sorts after every distance.
UNREACHABLE = int(np.iinfo(np.int32).max)

NEIGHBORS_8 = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))


class ScalarField:
    """Integer distance (in cells) per grid cell, or UNREACHABLE"""

    def __init__(self, dims, values):
        values = np.array(values, dtype=np.int32, copy=True)
        if values.shape != dims.shape:
            raise ValueError(f'Field shape {values.shape} does not match {dims}')
        values.flags.writeable = False
        self.dims = dims
        self.values = values

    def __getitem__(self, cell):
        x, y = cell
        return int(self.values[y, x])

    @property
    def flat(self):
        return self.values.reshape(-1)

    @property
    def reachable(self):
        return CellSet(self.dims, self.values != UNREACHABLE)

    def max_finite(self):
        finite = self.values[self.values != UNREACHABLE]
        return int(finite.max()) if finite.size else 0

    def min_over(self, cells):
        """Smallest finite value over a CellSet, or None"""

        picked = self.values[cells.mask & (self.values != UNREACHABLE)]
        return int(picked.min()) if picked.size else None

    def __repr__(self):
        return f'ScalarField({self.dims}, max {self.max_finite()})'


def distance_field(free_cells, sources):
    """Multi-source breadth-first distance over 8-connected cells.

    Parameters
    ----------
    free_cells : CellSet
        traversable support; pass `CellSet.full(dims)` for an
        obstacle-relaxed field
    sources : CellSet
        zero set of the field (always distance 0, even when not free)

    Returns
    -------
    ScalarField
        UNREACHABLE everywhere when `sources` is empty
    """

    dims = sources.dims
    width, height = dims.width, dims.height
    free = free_cells.mask
    values = np.full(dims.shape, UNREACHABLE, dtype=np.int32)

    queue = deque()
    for x, y in sources:
        values[y, x] = 0
        queue.append((x, y))

    while queue:
        x, y = queue.popleft()
        d = values[y, x] + 1
        for dx, dy in NEIGHBORS_8:
            nx, ny = x + dx, y + dy
            if 0 <= nx < width and 0 <= ny < height and free[ny, nx] and values[ny, nx] == UNREACHABLE:
                values[ny, nx] = d
                queue.append((nx, ny))

    return ScalarField(dims, values)
