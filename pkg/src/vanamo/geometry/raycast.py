"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import math
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from vanamo.geometry.grid import Cell

# unit steps for the 8 headings, counter-clockwise from +x
HEADING_VECTORS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))

STATIC = 'static'
MOVABLE = 'movable'

_EPS = 1e-9


class RayResult(NamedTuple):
    traversed: list
    hit: Optional[tuple]


def raycast(static_cells, movable_cells, origin, direction, max_range=None):
    """Walk a ray through the grid and report every cell it passes through.

    Traversal is the exact supercover of the ray: when the ray crosses a
    cell corner both side cells are visited (x side first) before the
    diagonal cell, so nothing leaks between two diagonal obstacles.

    Parameters
    ----------
    static_cells : CellSet
        static occupancy
    movable_cells : CellSet
        movable occupancy (same dims)
    origin : tuple of float
        continuous (x, y) point in cell units; cell (i, j) spans [i, i+1) x [j, j+1)
    direction : float
        ray angle in radians, counter-clockwise from +x
    max_range : float, optional
        stop once the ray parameter exceeds this distance (cells)

    Returns
    -------
    RayResult
        traversed cells in order (including the hit cell) and
        `(cell, 'static' | 'movable')` for the first occupied cell, or None
        when the ray reaches the grid boundary
    """

    dims = static_cells.dims
    ox, oy = float(origin[0]), float(origin[1])
    if not (0.0 <= ox < dims.width and 0.0 <= oy < dims.height):
        raise ValueError(f'Ray origin ({ox}, {oy}) is outside the {dims} grid')

    static = static_cells.mask
    movable = movable_cells.mask

    dx = math.cos(direction)
    dy = math.sin(direction)
    if abs(dx) < 1e-12:
        dx = 0.0
    if abs(dy) < 1e-12:
        dy = 0.0

    x, y = int(math.floor(ox)), int(math.floor(oy))
    step_x = 1 if dx > 0 else -1 if dx < 0 else 0
    step_y = 1 if dy > 0 else -1 if dy < 0 else 0

    if dx > 0:
        t_max_x = (x + 1 - ox) / dx
    elif dx < 0:
        t_max_x = (ox - x) / -dx
    else:
        t_max_x = math.inf
    if dy > 0:
        t_max_y = (y + 1 - oy) / dy
    elif dy < 0:
        t_max_y = (oy - y) / -dy
    else:
        t_max_y = math.inf
    t_delta_x = 1.0 / abs(dx) if dx else math.inf
    t_delta_y = 1.0 / abs(dy) if dy else math.inf

    traversed = []

    def visit(cx, cy):
        traversed.append(Cell(cx, cy))
        if static[cy, cx]:
            return (Cell(cx, cy), STATIC)
        if movable[cy, cx]:
            return (Cell(cx, cy), MOVABLE)
        return None

    hit = visit(x, y)
    while hit is None:
        if t_max_x < t_max_y - _EPS:
            t = t_max_x
            if max_range is not None and t > max_range:
                break
            x += step_x
            t_max_x += t_delta_x
            if not dims.contains(x, y):
                break
            hit = visit(x, y)
        elif t_max_y < t_max_x - _EPS:
            t = t_max_y
            if max_range is not None and t > max_range:
                break
            y += step_y
            t_max_y += t_delta_y
            if not dims.contains(x, y):
                break
            hit = visit(x, y)
        else:
            # exact corner crossing
            t = t_max_x
            if max_range is not None and t > max_range:
                break
            if dims.contains(x + step_x, y):
                hit = visit(x + step_x, y)
                if hit is not None:
                    break
            if dims.contains(x, y + step_y):
                hit = visit(x, y + step_y)
                if hit is not None:
                    break
            x += step_x
            y += step_y
            t_max_x += t_delta_x
            t_max_y += t_delta_y
            if not dims.contains(x, y):
                break
            hit = visit(x, y)

    return RayResult(traversed, hit)


@lru_cache(maxsize=2048)
def _sight_lines(width, height, ox, oy):
    """Cells strictly between the camera cell center and every target center.

    Exact integer segment/square test in doubled coordinates; a segment
    touching a cell corner counts as passing through that cell.

    Returns (indptr, indices): the intermediate cells of target t are
    indices[indptr[t]:indptr[t + 1]] (row-major flat indices).
    """

    n = width * height
    flat = np.arange(n)
    cx = flat % width
    cy = flat // width

    x0 = 2 * ox + 1
    y0 = 2 * oy + 1
    x1 = (2 * cx + 1)[:, None]
    y1 = (2 * cy + 1)[:, None]
    lx = (2 * cx)[None, :]
    ly = (2 * cy)[None, :]
    hx = lx + 2
    hy = ly + 2

    touch = (np.minimum(x0, x1) <= hx) & (np.maximum(x0, x1) >= lx) & \
            (np.minimum(y0, y1) <= hy) & (np.maximum(y0, y1) >= ly)

    ddx = x1 - x0
    ddy = y1 - y0
    s1 = ddx * (ly - y0) - ddy * (lx - x0)
    s2 = ddx * (ly - y0) - ddy * (hx - x0)
    s3 = ddx * (hy - y0) - ddy * (lx - x0)
    s4 = ddx * (hy - y0) - ddy * (hx - x0)
    above = (s1 > 0) & (s2 > 0) & (s3 > 0) & (s4 > 0)
    below = (s1 < 0) & (s2 < 0) & (s3 < 0) & (s4 < 0)
    touch &= ~above & ~below

    touch[:, oy * width + ox] = False
    touch[flat, flat] = False

    rows, cols = np.nonzero(touch)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum(np.bincount(rows, minlength=n))
    return indptr, cols.astype(np.int32)


@lru_cache(maxsize=8192)
def _view_cone(width, height, ox, oy, heading, sensing_range):
    """Cells whose centers lie within 45 degrees of the heading and in range"""

    flat = np.arange(width * height)
    vx = flat % width - ox
    vy = flat // width - oy
    ux, uy = HEADING_VECTORS[heading % 8]
    dot = vx * ux + vy * uy
    uu = ux * ux + uy * uy
    vv = vx * vx + vy * vy
    cone = (dot >= 0) & (2 * dot * dot >= vv * uu) & (vv <= sensing_range * sensing_range)
    cone[oy * width + ox] = True
    cone.flags.writeable = False
    return cone


def visible_cells(dims, origin, heading, occupied_flat, sensing_range=None):
    """Flat mask of cells whose centers the camera can see.

    A cell is visible when its center is inside the 90 degree view cone of
    `heading`, within `sensing_range`, and no occupied cell lies on the
    segment from the camera (center of `origin`) to that center. Occupied
    cells can be visible themselves; those are the hits of an observation.

    Parameters
    ----------
    dims : GridDims
    origin : Cell
        camera cell
    heading : int
        heading index 0..7
    occupied_flat : numpy.ndarray (bool)
        row-major occupancy used as occluders
    sensing_range : float, optional
        defaults to the grid diagonal
    """

    ox, oy = origin
    if not dims.contains(ox, oy):
        raise ValueError(f'Camera cell ({ox}, {oy}) is outside the {dims} grid')
    if sensing_range is None or sensing_range <= 0:
        sensing_range = dims.diagonal
    indptr, indices = _sight_lines(dims.width, dims.height, ox, oy)
    blocked_along = np.concatenate(([0], np.cumsum(occupied_flat[indices], dtype=np.int64)))
    blocked = (blocked_along[indptr[1:]] - blocked_along[indptr[:-1]]) > 0
    return _view_cone(dims.width, dims.height, ox, oy, heading % 8, float(sensing_range)) & ~blocked


def fan_angles(dims, heading, sensing_range=None):
    """Ray directions covering the 90 degree cone of `heading`.

    The angular step is 0.25 / range radians, fine enough that adjacent rays
    never skip a cell within range.
    """

    if sensing_range is None or sensing_range <= 0:
        sensing_range = dims.diagonal
    step = 0.25 / sensing_range
    center = heading * math.pi / 4
    count = int(math.ceil((math.pi / 2) / step))
    return [center - math.pi / 4 + i * (math.pi / 2) / count for i in range(count + 1)]
