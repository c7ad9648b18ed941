"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import hashlib
import logging

from vanamo.geometry import CellSet, visible_cells
from vanamo.sim.actions import Occupancy
from vanamo.sim.bodies import RobotModel

logger = logging.getLogger(__name__)

_VIEW_CACHE_LIMIT = 65536


class InconsistentObservation(ValueError):
    """Observation reporting a cell as both viewed-free and occupied"""


class PoseConflict(ValueError):
    """Predicted object pose that leaves the grid or overlaps a known obstacle"""


class BeliefGrids:
    """What the robot knows: viewed cells, known static cells, known movables.

    Instances are treated as immutable; every update returns a new object.

    Parameters
    ----------
    dims : GridDims
    robot : RobotModel
    viewed : CellSet
        every cell ever seen free (GridV); only grows. Cells later covered by
        a known obstacle stay in it, see `free_viewed`
    static : CellSet
        known static obstacles (GridO)
    objects : dict
        object id -> MovableObject, last known pose (GridM)
    """

    def __init__(self, dims, robot=None, viewed=None, static=None, objects=None):
        self.dims = dims
        self.robot = robot if robot is not None else RobotModel()
        self.viewed = viewed if viewed is not None else CellSet.empty(dims)
        self.static = static if static is not None else CellSet.empty(dims)
        self.objects = dict(objects or {})
        self._views = {}
        self._static_set = None

    @classmethod
    def empty(cls, dims, robot=None):
        return cls(dims, robot)

    def _derive(self, viewed=None, static=None, objects=None):
        return BeliefGrids(self.dims, self.robot,
                           self.viewed if viewed is None else viewed,
                           self.static if static is None else static,
                           self.objects if objects is None else objects)

    def movable_cells(self, exclude=()):
        return CellSet.from_cells(self.dims, [c for obj in self.objects.values()
                                              if obj.id not in exclude for c in obj.cells])

    def known_occupied(self, include_movables=True, exclude=()):
        if not include_movables:
            return self.static
        return self.static | self.movable_cells(exclude)

    @property
    def free_viewed(self):
        """Viewed cells not known to be occupied now"""
        return self.viewed - self.known_occupied()

    @property
    def static_set(self):
        if self._static_set is None:
            self._static_set = frozenset(self.static)
        return self._static_set

    def occupancy(self, movables_block=True, forbidden=frozenset()):
        """Occupancy for the action model over known obstacles only"""

        return Occupancy(self.dims, self.static_set, self.objects, movables_block, forbidden)

    def view_from(self, q, see_through=False):
        """Simulated view from q against known occupancy.

        Cells not known to be occupied do not block rays. When
        `see_through` is set only static cells occlude; otherwise known
        movables occlude too, with an attached object at its carried pose.
        """

        carried = q.carried_pose() if q.attachment is not None else None
        key = (q.cell, q.heading, q.attachment, carried, see_through)
        cached = self._views.get(key)
        if cached is not None:
            return cached

        occupied = self.static.flat.copy()
        if not see_through:
            held = q.attachment.object_id if q.attachment is not None else None
            for obj in self.objects.values():
                if obj.id == held:
                    continue
                for x, y in obj.cells:
                    occupied[self.dims.flat(x, y)] = True
            if held is not None and held in self.objects:
                anchor, heading = carried
                for x, y in self.objects[held].footprint.cells(anchor, heading):
                    if self.dims.contains(x, y):
                        occupied[self.dims.flat(x, y)] = True

        seen = visible_cells(self.dims, q.cell, q.heading, occupied, self.robot.sensing_range) & ~occupied
        for x, y in self.robot.cells(q):
            if self.dims.contains(x, y) and not self.static.flat[self.dims.flat(x, y)]:
                seen[self.dims.flat(x, y)] = True
        view = CellSet.from_flat(self.dims, seen)

        if len(self._views) >= _VIEW_CACHE_LIMIT:
            self._views.clear()
        self._views[key] = view
        return view

    def with_objects(self, objects):
        """Belief with the movable poses replaced (no overlap checks)"""
        return self._derive(objects=objects)

    def with_viewed(self, cells):
        """Belief with extra viewed cells"""

        grown = self.viewed | cells
        if grown == self.viewed:
            return self
        return self._derive(viewed=grown)

    def digest(self):
        sha = hashlib.sha1()
        sha.update(self.viewed.digest_bytes())
        sha.update(self.static.digest_bytes())
        for oid in sorted(self.objects):
            obj = self.objects[oid]
            sha.update(f'{oid}:{obj.anchor.x},{obj.anchor.y},{obj.heading};'.encode())
        return sha.hexdigest()

    def __repr__(self):
        return (f'BeliefGrids({self.dims}, viewed {len(self.viewed)}, static {len(self.static)}, '
                f'objects {sorted(self.objects)})')


def update_belief(belief, obs):
    """Merge an observation into the belief.

    Viewed cells accumulate. Static hits join GridO. Sighted movables take
    their observed pose; a known movable whose believed cells are now seen
    free and that was not sighted is dropped.

    Raises
    ------
    ValueError
        dims mismatch
    InconsistentObservation
        a hit cell is also reported as viewed
    """

    if obs.viewed.dims != belief.dims:
        raise ValueError(f'Observation dims {obs.viewed.dims} do not match belief {belief.dims}')
    hit_cells = obs.hit_cells()
    if not hit_cells.isdisjoint(obs.viewed):
        clash = next(iter(hit_cells & obs.viewed))
        raise InconsistentObservation(f'Cell ({clash.x}, {clash.y}) is both viewed and hit')

    static = belief.static | CellSet.from_cells(belief.dims, [h.cell for h in obs.hits if h.object_id is None])

    objects = {}
    for oid, obj in belief.objects.items():
        if oid in obs.sightings:
            continue
        if not CellSet.from_cells(belief.dims, obj.cells).isdisjoint(obs.viewed):
            logger.debug('Dropping %s: its believed cells were seen free', oid)
            continue
        objects[oid] = obj
    for oid, obj in obs.sightings.items():
        objects[oid] = obj

    return BeliefGrids(belief.dims, belief.robot, belief.viewed | obs.viewed, static, objects)


def update_pose(belief, object_id, anchor, heading=None):
    """Belief with one known object moved (planner side effect of a manipulation).

    Raises
    ------
    KeyError
        unknown object
    PoseConflict
        the new pose overlaps known static cells, another known object, or
        leaves the grid
    """

    obj = belief.objects[object_id]
    moved = obj.moved_to(anchor, heading)
    for x, y in moved.cells:
        if not belief.dims.contains(x, y):
            raise PoseConflict(f'{object_id} would leave the grid at ({x}, {y})')
    cells = CellSet.from_cells(belief.dims, moved.cells)
    if not cells.isdisjoint(belief.static):
        raise PoseConflict(f'{object_id} would overlap a static obstacle')
    if not cells.isdisjoint(belief.movable_cells(exclude=(object_id,))):
        raise PoseConflict(f'{object_id} would overlap another movable object')
    objects = dict(belief.objects)
    objects[object_id] = moved
    return belief._derive(objects=objects)


def apply_effects(belief, viewed=None, moves=()):
    """Belief after a planned segment: extra viewed cells and object moves.

    Parameters
    ----------
    viewed : CellSet, optional
    moves : iterable of MovableObject
        final poses of objects moved by the segment
    """

    out = belief
    for moved in moves:
        out = update_pose(out, moved.id, moved.anchor, moved.heading)
    if viewed is not None:
        out = out.with_viewed(viewed)
    return out
