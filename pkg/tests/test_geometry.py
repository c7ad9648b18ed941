import heapq
import math
from fractions import Fraction

import numpy as np
import pytest

from vanamo.geometry import (Cell, CellSet, Footprint, Grid2, GridDims, HEADING_VECTORS, STATIC, MOVABLE,
                             UNREACHABLE, distance_field, incremental_sweep, raycast, ring_rotate,
                             swept_cells, visible_cells)
from vanamo.sim import Configuration


def random_mask(rng, dims, density):
    return rng.random(dims.shape) < density


# oracles

def segment_square_enter(origin, angle, cell):
    """Entry parameter of a ray into the open square of `cell`, or None"""

    ox, oy = origin
    dx, dy = math.cos(angle), math.sin(angle)
    t0, t1 = 0.0, math.inf
    for o, d, lo in ((ox, dx, cell[0]), (oy, dy, cell[1])):
        hi = lo + 1
        if abs(d) < 1e-15:
            if not lo < o < hi:
                return None
            continue
        a, b = (lo - o) / d, (hi - o) / d
        t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
    if t0 < t1:
        return t0
    return None


def ray_oracle(static, movable, origin, angle):
    """Cells the ray crosses in order of entry, up to and including the first occupied one"""

    dims = static.dims
    entered = []
    for y in range(dims.height):
        for x in range(dims.width):
            t = segment_square_enter(origin, angle, (x, y))
            if t is not None:
                entered.append((t, Cell(x, y)))
    entered.sort()
    cells = []
    for _, cell in entered:
        cells.append(cell)
        if cell in static or cell in movable:
            break
    return cells


def touches(a, b, square):
    """Closed segment a-b meets the closed unit square at `square` (exact)"""

    (x0, y0), (x1, y1) = a, b
    lx, ly = square
    t0, t1 = Fraction(0), Fraction(1)
    for p, d, lo in ((x0, x1 - x0, lx), (y0, y1 - y0, ly)):
        hi = lo + 1
        if d == 0:
            if p < lo or p > hi:
                return False
            continue
        u, v = Fraction(lo - p) / d, Fraction(hi - p) / d
        t0, t1 = max(t0, min(u, v)), min(t1, max(u, v))
    return t0 <= t1


def line_of_sight_oracle(dims, origin, heading, occupied):
    """Per-cell visibility: center in the 90 degree cone, no occupied cell touching the sight line"""

    ox, oy = origin
    ux, uy = HEADING_VECTORS[heading]
    a = (Fraction(2 * ox + 1, 2), Fraction(2 * oy + 1, 2))
    blockers = [(int(x), int(y)) for y, x in zip(*np.nonzero(occupied)) if (x, y) != (ox, oy)]
    seen = np.zeros(dims.shape, dtype=bool)
    for y in range(dims.height):
        for x in range(dims.width):
            vx, vy = x - ox, y - oy
            if (vx, vy) != (0, 0):
                cos = (vx * ux + vy * uy) / (math.hypot(vx, vy) * math.hypot(ux, uy))
                if cos < math.cos(math.pi / 4) - 1e-12:
                    continue
            b = (Fraction(2 * x + 1, 2), Fraction(2 * y + 1, 2))
            clear = True
            for cx, cy in blockers:
                if (cx, cy) == (x, y):
                    continue
                if not (min(ox, x) - 1 <= cx <= max(ox, x) + 1 and min(oy, y) - 1 <= cy <= max(oy, y) + 1):
                    continue
                if touches(a, b, (cx, cy)):
                    clear = False
                    break
            seen[y, x] = clear
    return seen


def dijkstra_oracle(free, sources):
    height, width = free.shape
    dist = {}
    heap = [(0, x, y) for y, x in zip(*np.nonzero(sources))]
    heapq.heapify(heap)
    while heap:
        d, x, y = heapq.heappop(heap)
        if (x, y) in dist:
            continue
        dist[(x, y)] = d
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nx, ny = x + dx, y + dy
                if (dx or dy) and 0 <= nx < width and 0 <= ny < height and free[ny, nx] and (nx, ny) not in dist:
                    heapq.heappush(heap, (d + 1, nx, ny))
    out = np.full(free.shape, UNREACHABLE, dtype=np.int64)
    for (x, y), d in dist.items():
        out[y, x] = d
    return out


# grid

def test_cellset_algebra():
    dims = GridDims(4, 3)
    a = CellSet.from_cells(dims, [(0, 0), (1, 0), (2, 2)])
    b = CellSet.from_cells(dims, [(1, 0), (3, 1)])
    assert len(a | b) == 4
    assert list(a & b) == [Cell(1, 0)]
    assert Cell(2, 2) in a - b
    assert len(a.complement()) == 9
    assert (a & b) <= a
    assert not a.isdisjoint(b)
    with pytest.raises(ValueError):
        CellSet.from_cells(dims, [(4, 0)])
    with pytest.raises(ValueError):
        a | CellSet.empty(GridDims(3, 4))


def test_grid_dims_reject_empty():
    with pytest.raises(ValueError):
        GridDims(0, 5)


def test_grid2_ascii_and_h5(tmp_path):
    dims = GridDims(3, 2)
    grid = Grid2(dims, np.array([[0, 1, 0], [1, 1, 0]], dtype=np.uint8))
    text = grid.to_ascii({0: '.', 1: '#'})
    assert text.splitlines() == ['##.', '.#.']
    assert Grid2.from_ascii(text, {'.': 0, '#': 1}) == grid

    path = tmp_path / 'grid.h5'
    grid.save(path)
    assert Grid2.load(path) == grid


@pytest.mark.parametrize('heading', range(8))
def test_ring_rotation_is_a_bijection(heading):
    ring = [(dx, dy) for dx in range(-2, 3) for dy in range(-2, 3)]
    rotated = [ring_rotate(o, heading) for o in ring]
    assert sorted(rotated) == sorted(ring)
    for (dx, dy), (rx, ry) in zip(ring, rotated):
        assert max(abs(dx), abs(dy)) == max(abs(rx), abs(ry))


def test_ring_rotation_matches_quarter_turns():
    for dx in range(-2, 3):
        for dy in range(-2, 3):
            assert ring_rotate((dx, dy), 2) == (-dy, dx)
            assert ring_rotate((dx, dy), 4) == (-dx, -dy)
    assert ring_rotate((1, 0), 1) == (1, 1)


def test_bar_footprint_is_perpendicular_to_heading():
    bar = Footprint.bar(3)
    assert sorted(bar.cells((5, 5), 0)) == [(5, 4), (5, 5), (5, 6)]
    assert sorted(bar.cells((5, 5), 2)) == [(4, 5), (5, 5), (6, 5)]
    assert sorted(bar.cells((5, 5), 1)) == [(4, 6), (5, 5), (6, 4)]
    with pytest.raises(ValueError):
        Footprint.bar(2)
    assert Footprint.rectangle(5, 2).bounding_box == (5, 2)


# ray casting

def test_ray_stops_at_first_obstacle():
    dims = GridDims(8, 3)
    static = CellSet.from_cells(dims, [(6, 1)])
    movable = CellSet.from_cells(dims, [(4, 1)])
    ray = raycast(static, movable, (0.5, 1.5), 0.0)
    assert ray.traversed == [Cell(x, 1) for x in range(5)]
    assert ray.hit == (Cell(4, 1), MOVABLE)

    ray = raycast(static, CellSet.empty(dims), (0.5, 1.5), 0.0)
    assert ray.hit == (Cell(6, 1), STATIC)


def test_ray_leaves_grid_without_hit():
    dims = GridDims(5, 5)
    empty = CellSet.empty(dims)
    ray = raycast(empty, empty, (2.5, 2.5), math.pi / 2)
    assert ray.hit is None
    assert ray.traversed == [Cell(2, y) for y in range(2, 5)]


def test_ray_corner_crossing_visits_both_sides():
    dims = GridDims(4, 4)
    empty = CellSet.empty(dims)
    ray = raycast(empty, empty, (0.5, 0.5), math.pi / 4)
    assert ray.traversed[:4] == [Cell(0, 0), Cell(1, 0), Cell(0, 1), Cell(1, 1)]

    # two diagonal obstacles close the gap
    static = CellSet.from_cells(dims, [(1, 0), (0, 1)])
    ray = raycast(static, empty, (0.5, 0.5), math.pi / 4)
    assert ray.hit == (Cell(1, 0), STATIC)


def test_ray_range_limit():
    dims = GridDims(10, 1)
    empty = CellSet.empty(dims)
    ray = raycast(empty, empty, (0.5, 0.5), 0.0, max_range=3.0)
    assert ray.traversed[-1] == Cell(3, 0)


def test_ray_origin_outside_grid():
    dims = GridDims(3, 3)
    with pytest.raises(ValueError):
        raycast(CellSet.empty(dims), CellSet.empty(dims), (3.5, 0.5), 0.0)


def test_raycast_matches_square_entry_oracle():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        dims = GridDims(int(rng.integers(2, 33)), int(rng.integers(2, 33)))
        static = CellSet(dims, random_mask(rng, dims, 0.05))
        movable = CellSet(dims, random_mask(rng, dims, 0.05) & ~static.mask)
        origin = (float(rng.uniform(0, dims.width - 1e-6)), float(rng.uniform(0, dims.height - 1e-6)))
        angle = float(rng.uniform(-math.pi, math.pi))
        ray = raycast(static, movable, origin, angle)
        assert ray.traversed == ray_oracle(static, movable, origin, angle)


# line of sight

def test_visible_cells_match_line_of_sight_oracle():
    rng = np.random.default_rng(11)
    dims = GridDims(16, 16)
    for _ in range(50):
        occupied = random_mask(rng, dims, 0.12)
        ox, oy = int(rng.integers(0, 16)), int(rng.integers(0, 16))
        occupied[oy, ox] = False
        heading = int(rng.integers(0, 8))
        seen = visible_cells(dims, Cell(ox, oy), heading, occupied.reshape(-1))
        assert np.array_equal(seen.reshape(dims.shape), line_of_sight_oracle(dims, (ox, oy), heading, occupied))


def test_visible_cells_respect_range():
    dims = GridDims(12, 3)
    seen = visible_cells(dims, Cell(0, 1), 0, np.zeros(dims.size, dtype=bool), sensing_range=4)
    xs = {dims.unflat(i).x for i in np.flatnonzero(seen)}
    assert max(xs) == 4


# distance fields

def test_distance_field_matches_dijkstra():
    rng = np.random.default_rng(3)
    for _ in range(50):
        dims = GridDims(int(rng.integers(3, 25)), int(rng.integers(3, 25)))
        free = random_mask(rng, dims, 0.7)
        sources = random_mask(rng, dims, 0.02)
        field = distance_field(CellSet(dims, free), CellSet(dims, sources))
        assert np.array_equal(field.values.astype(np.int64), dijkstra_oracle(free, sources))


def test_distance_field_without_sources():
    dims = GridDims(4, 4)
    field = distance_field(CellSet.full(dims), CellSet.empty(dims))
    assert (field.values == UNREACHABLE).all()
    assert not field.reachable


def test_distance_field_uses_diagonal_steps():
    dims = GridDims(5, 5)
    field = distance_field(CellSet.full(dims), CellSet.from_cells(dims, [(0, 0)]))
    assert field[(4, 4)] == 4
    assert field[(4, 1)] == 4
    assert field.min_over(CellSet.from_cells(dims, [(2, 3), (4, 4)])) == 3


# sweeps

def test_swept_cells_cover_the_path():
    dims = GridDims(6, 5)
    path = [Configuration(Cell(1, 2), 0), Configuration(Cell(2, 2), 0), Configuration(Cell(2, 2), 1)]
    swept = swept_cells(Footprint.bar(3), path, dims)
    assert set(swept) == {(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1)}
    fresh = incremental_sweep(Footprint.bar(3), path, dims)
    assert [len(f) for f in fresh] == [3, 3, 1]
    with pytest.raises(ValueError):
        swept_cells(Footprint.bar(3), [Configuration(Cell(0, 0), 0)], dims)
    with pytest.raises(ValueError):
        swept_cells(Footprint.bar(3), [], dims)
