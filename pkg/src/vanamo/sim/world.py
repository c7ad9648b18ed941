"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
from dataclasses import dataclass, field, replace

from vanamo.geometry import CellSet
from vanamo.sim.actions import ActionModel, Occupancy, RejectedAction
from vanamo.sim.bodies import RobotModel

logger = logging.getLogger(__name__)


class GoalRegion:
    """Accepting robot cells (any heading)"""

    def __init__(self, cells):
        if not isinstance(cells, CellSet):
            raise TypeError('GoalRegion expects a CellSet')
        if not cells:
            raise ValueError('Goal region must not be empty')
        self.cells = cells

    def accepts(self, q):
        return q.cell in self.cells

    def __eq__(self, other):
        return isinstance(other, GoalRegion) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f'GoalRegion({len(self.cells)} cells)'


class InvalidWorld(ValueError):
    """World state violating the occupancy invariants"""


@dataclass(frozen=True)
class WorldState:
    """Ground truth: static map, movable objects, robot, goal.

    Parameters
    ----------
    dims : GridDims
    static : CellSet
    objects : dict
        object id -> MovableObject, in declaration order
    robot : Configuration
    goal : GoalRegion
    model : RobotModel
    """

    dims: object
    static: CellSet
    objects: dict
    robot: object
    goal: GoalRegion
    model: RobotModel = field(default_factory=RobotModel)

    def __post_init__(self):
        self.validate()

    def validate(self):
        taken = {}
        for cell in self.static:
            taken[cell] = 'static'
        for obj in self.objects.values():
            for cell in obj.cells:
                if not self.dims.contains(*cell):
                    raise InvalidWorld(f'{obj.id} leaves the grid at {tuple(cell)}')
                if cell in taken:
                    raise InvalidWorld(f'{obj.id} overlaps {taken[cell]} at {tuple(cell)}')
                taken[cell] = obj.id
        for cell in self.model.cells(self.robot):
            if not self.dims.contains(*cell):
                raise InvalidWorld(f'Robot leaves the grid at {tuple(cell)}')
            if cell in taken:
                raise InvalidWorld(f'Robot overlaps {taken[cell]} at {tuple(cell)}')
        if self.robot.attachment is not None:
            held = self.robot.attachment.object_id
            if held not in self.objects:
                raise InvalidWorld(f'Robot holds unknown object {held}')
            if self.objects[held].pose != self.robot.carried_pose():
                raise InvalidWorld(f'{held} is not at its attached pose')

    @property
    def static_set(self):
        return frozenset(self.static)

    def occupancy(self):
        return Occupancy(self.dims, self.static_set, self.objects)

    def movable_cells(self):
        return CellSet.from_cells(self.dims, [c for obj in self.objects.values() for c in obj.cells])

    def occupied(self):
        return self.static | self.movable_cells()

    def owner_of(self, cell):
        """'static', an object id, or None"""

        if cell in self.static:
            return 'static'
        for obj in self.objects.values():
            if cell in obj.cells:
                return obj.id
        return None

    def robot_cells(self):
        return self.model.cells(self.robot)

    def at_goal(self):
        return self.goal.accepts(self.robot)


def step(world, action):
    """Execute one action against ground truth.

    Visibility plays no part here; only occupancy and the action
    preconditions decide.

    Returns
    -------
    WorldState or RejectedAction
    """

    outcome = ActionModel(world.model).apply(world.robot, action, world.occupancy())
    if isinstance(outcome, RejectedAction):
        logger.debug('World rejected %s at %s: %s', action, world.robot, outcome)
        return outcome
    objects = world.objects
    if outcome.moved is not None:
        objects = dict(objects)
        objects[outcome.moved.id] = outcome.moved
    return replace(world, objects=objects, robot=outcome.config)
