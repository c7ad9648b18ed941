"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import numpy as np

from vanamo.geometry.grid import CellSet


def swept_cells(footprint, path, dims, attached=None):
    """Union of the cells covered by a body along a path.

    Parameters
    ----------
    footprint : Footprint
        body shape of the moving agent
    path : sequence
        configurations exposing `cell` and `heading`
    dims : GridDims
    attached : callable, optional
        configuration -> iterable of cells occupied by a carried object

    Returns
    -------
    CellSet
    """

    if len(path) == 0:
        raise ValueError('Cannot sweep an empty path')

    mask = np.zeros(dims.shape, dtype=bool)
    for q in path:
        cells = footprint.cells(q.cell, q.heading)
        if attached is not None:
            cells = cells + list(attached(q))
        for x, y in cells:
            if not dims.contains(x, y):
                raise ValueError(f'Swept cell ({x}, {y}) at configuration {q} leaves the {dims} grid')
            mask[y, x] = True
    return CellSet(dims, mask)


def incremental_sweep(footprint, path, dims, attached=None):
    """Cells newly covered at each step of the path (first entry: the start)"""

    seen = np.zeros(dims.shape, dtype=bool)
    steps = []
    for q in path:
        cells = footprint.cells(q.cell, q.heading)
        if attached is not None:
            cells = cells + list(attached(q))
        fresh = []
        for x, y in cells:
            if not dims.contains(x, y):
                raise ValueError(f'Swept cell ({x}, {y}) at configuration {q} leaves the {dims} grid')
            if not seen[y, x]:
                seen[y, x] = True
                fresh.append((x, y))
        steps.append(fresh)
    return steps
