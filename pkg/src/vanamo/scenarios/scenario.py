"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from vanamo.geometry import CellSet, Footprint, GridDims
from vanamo.sim import (BeliefGrids, Configuration, GoalRegion, RobotModel, RejectedAction, WorldState,
                        format_script, observe, step, update_belief)

logger = logging.getLogger(__name__)

DEFAULT_DIMS = GridDims(24, 24)
ROBOT_WIDTHS = (1, 3)


class Category(str, Enum):
    """Task categories; each generator certifies its defining constraint"""

    SIMPLE_NAVIGATION = 'SimpleNavigation'
    VISIBILITY = 'Visibility'
    MOVABLE_OBSTACLES = 'MovableObstacles'
    OBSTRUCTED_VISIBILITY = 'ObstructedVisibility'
    OCCLUDING_OBSTACLES = 'OccludingObstacles'
    OBSTRUCTED_AFFORDANCE = 'ObstructedAffordance'

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name):
        """Category from its name, ignoring case, '-' and '_'"""

        if isinstance(name, Category):
            return name
        wanted = str(name).replace('-', '').replace('_', '').lower()
        for category in cls:
            if category.value.lower() == wanted or category.name.replace('_', '').lower() == wanted:
                return category
        raise ValueError(f'Unknown category {name!r}; choose from {", ".join(c.value for c in cls)}')


class WitnessError(ValueError):
    """Scripted action sequence that does not reach the goal"""


@dataclass(frozen=True)
class Scenario:
    """One problem instance: map, objects, robot start and goal.

    Parameters
    ----------
    dims : GridDims
    static : CellSet
        static obstacle cells
    objects : tuple of MovableObject
        in declaration order
    start : Configuration
        robot start (no attachment)
    goal : CellSet
        goal region (robot cell membership)
    robot_width : int
        1 or 3 cells, perpendicular to the heading
    sensing_range : float, optional
        None means the grid diagonal
    category : Category, optional
    seed : int, optional
    witness : tuple of Action
        action sequence that reaches the goal in the simulator
    """

    dims: GridDims
    static: CellSet
    objects: tuple
    start: Configuration
    goal: CellSet
    robot_width: int = 3
    sensing_range: Optional[float] = None
    category: Optional[Category] = None
    seed: Optional[int] = None
    witness: tuple = field(default=())

    def __post_init__(self):
        if self.robot_width not in ROBOT_WIDTHS:
            raise ValueError(f'robot_width must be one of {ROBOT_WIDTHS}, got {self.robot_width}')
        if self.start.attachment is not None:
            raise ValueError('The robot must start with nothing attached')
        ids = [obj.id for obj in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError(f'Object ids are not unique: {ids}')
        if not self.goal:
            raise ValueError('Goal region must not be empty')
        # raises InvalidWorld on overlaps
        self.to_world()

    @property
    def model(self):
        return RobotModel(Footprint.bar(self.robot_width), self.sensing_range)

    def to_world(self):
        return WorldState(self.dims, self.static, {obj.id: obj for obj in self.objects},
                          self.start, GoalRegion(self.goal), self.model)

    def initial_belief(self):
        """Belief after the first observation from the start"""

        world = self.to_world()
        return update_belief(BeliefGrids.empty(self.dims, self.model), observe(world))

    def omniscient_belief(self):
        """Everything viewed, every obstacle known"""

        return BeliefGrids(self.dims, self.model, CellSet.full(self.dims), self.static,
                           {obj.id: obj for obj in self.objects})

    def object(self, object_id):
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)

    def replay(self, actions):
        """Worlds visited by executing `actions` from the start (start included).

        Raises
        ------
        WitnessError
            an action is rejected by the simulator
        """

        world = self.to_world()
        worlds = [world]
        for n, action in enumerate(actions):
            outcome = step(world, action)
            if isinstance(outcome, RejectedAction):
                raise WitnessError(f'Action {n} ({action.token()}) rejected at {world.robot}: {outcome}')
            world = outcome
            worlds.append(world)
        return worlds

    def witness_reaches_goal(self):
        try:
            return self.replay(self.witness)[-1].at_goal()
        except WitnessError as err:
            logger.info('Witness of %s fails: %s', self, err)
            return False

    def with_witness(self, actions):
        return replace(self, witness=tuple(actions))

    def __str__(self):
        tag = f'{self.category or "uncategorized"}'
        if self.seed is not None:
            tag += f' #{self.seed}'
        return (f'{tag} ({self.dims.width}x{self.dims.height}, {len(self.objects)} objects, '
                f'witness: {format_script(self.witness) or "-"})')
