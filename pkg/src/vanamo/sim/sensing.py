"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from vanamo.geometry import (CellSet, fan_angles, raycast, visible_cells,
                             STATIC, MOVABLE)


@dataclass(frozen=True)
class Hit:
    cell: object
    kind: str
    object_id: object = None

    def __str__(self):
        label = self.kind if self.object_id is None else f'{self.kind}({self.object_id})'
        return f'({self.cell.x}, {self.cell.y}) {label}'


@dataclass(frozen=True)
class Observation:
    """One camera frame.

    Attributes
    ----------
    viewed : CellSet
        free cells seen from the camera, plus the robot footprint
    hits : tuple of Hit
        occupied cells seen, sorted row-major, with ground-truth labels
    sightings : dict
        object id -> MovableObject for every movable with a hit
    """

    viewed: CellSet
    hits: tuple
    sightings: dict = field(default_factory=dict)

    def hit_cells(self):
        return CellSet.from_cells(self.viewed.dims, [h.cell for h in self.hits])

    def serialize(self):
        """Stable text form used by trace logs"""

        hits = ';'.join(str(h) for h in self.hits)
        return f'viewed={len(self.viewed)} hits=[{hits}]'

    def digest(self):
        sha = hashlib.sha1()
        sha.update(self.viewed.digest_bytes())
        sha.update(self.serialize().encode())
        return sha.hexdigest()


def observe(world, q=None):
    """Simulated camera frame of the ground-truth world from configuration q.

    Each cell whose center is in the 90 degree cone and in sensing range is
    tested for line of sight from the camera (center of the robot cell);
    free visible cells are viewed and occupied visible cells are hits. A
    fan of rays (angular step 0.25 / range) adds the first occupied cell of
    every ray to the hits. The robot footprint is always viewed.

    Parameters
    ----------
    world : WorldState
    q : Configuration, optional
        defaults to the robot configuration of `world`
    """

    if q is None:
        q = world.robot
    dims = world.dims
    rng = world.model.sensing_range
    static = world.static
    movable = world.movable_cells()
    occupied = static | movable

    visible = visible_cells(dims, q.cell, q.heading, occupied.flat, rng)
    hit_flat = visible & occupied.flat

    movable_sets = {obj.id: CellSet.from_cells(dims, obj.cells) for obj in world.objects.values()}
    origin = (q.cell.x + 0.5, q.cell.y + 0.5)
    max_range = rng if rng is not None and rng > 0 else dims.diagonal
    for angle in fan_angles(dims, q.heading, rng):
        ray = raycast(static, movable, origin, angle, max_range)
        if ray.hit is not None:
            cell = ray.hit[0]
            hit_flat[dims.flat(cell.x, cell.y)] = True

    viewed_flat = visible & ~occupied.flat
    for cell in world.model.cells(q):
        if dims.contains(*cell) and not occupied.flat[dims.flat(*cell)]:
            viewed_flat[dims.flat(*cell)] = True

    hits = []
    sightings = {}
    for index in np.flatnonzero(hit_flat):
        cell = dims.unflat(int(index))
        if static.flat[index]:
            hits.append(Hit(cell, STATIC))
            continue
        owner = next(oid for oid, cells in movable_sets.items() if cell in cells)
        hits.append(Hit(cell, MOVABLE, owner))
        sightings[owner] = world.objects[owner]
    return Observation(CellSet.from_flat(dims, viewed_flat), tuple(hits), sightings)
