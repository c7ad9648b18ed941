"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from vanamo.geometry import CellSet, UNREACHABLE
from vanamo.sim.actions import MOTIONS, ActionModel, RejectedAction

logger = logging.getLogger(__name__)

EXHAUSTED = 'exhausted'
BUDGET_EXCEEDED = 'budget-exceeded'
INVALID_START = 'invalid-start'

DEFAULT_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class SearchMode:
    """Which constraints a search enforces.

    Attributes
    ----------
    visibility : bool
        every newly covered cell must be viewed (belief or along the path)
    movables : bool
        known movable objects are obstacles
    forbidden : frozenset of Cell
        cells no body may enter, whatever else is relaxed
    see_through_movables : bool
        simulated views ignore movables as occluders
    """

    visibility: bool = True
    movables: bool = True
    forbidden: frozenset = frozenset()
    see_through_movables: bool = False

    @classmethod
    def direct(cls, forbidden=frozenset()):
        return cls(True, True, frozenset(forbidden))

    @classmethod
    def visibility_relaxed(cls, forbidden=frozenset()):
        return cls(False, True, frozenset(forbidden))

    @classmethod
    def collision_relaxed(cls, forbidden=frozenset()):
        return cls(True, False, frozenset(forbidden), see_through_movables=True)

    def with_forbidden(self, cells):
        return SearchMode(self.visibility, self.movables, self.forbidden | frozenset(cells),
                          self.see_through_movables)


class SearchNode(NamedTuple):
    config: object
    g: int
    seen: int
    parent: Optional['SearchNode']
    action: object


class Plan(NamedTuple):
    """Action-level result of a successful search.

    `configs` has one entry more than `actions` (the start). `seen` is the
    inherited visibility at the final configuration, or None when the
    search did not track visibility.
    """

    actions: list
    configs: list
    cost: int
    expanded: int
    seen: Optional[CellSet] = None

    @property
    def final(self):
        return self.configs[-1]

    def __len__(self):
        return len(self.actions)


class Failure(NamedTuple):
    reason: str
    expanded: int = 0

    def __bool__(self):
        return False


# goal predicates

class GoalPredicate:
    """Accepting test over (configuration, inherited visibility bits)"""

    needs_vision = False

    def accepts(self, q, seen):
        raise NotImplementedError

    def signature(self):
        raise NotImplementedError


class RegionGoal(GoalPredicate):

    def __init__(self, cells):
        self.cells = cells

    def accepts(self, q, seen):
        return q.cell in self.cells

    def signature(self):
        return ('region', self.cells.digest_bytes())


class ConfigGoal(GoalPredicate):
    """Exact configuration; the attachment has to match too"""

    def __init__(self, config):
        self.config = config

    def accepts(self, q, seen):
        return q == self.config

    def signature(self):
        return ('config', self.config)


class ViewGoal(GoalPredicate):
    """Accept once some cell of `target` has been viewed.

    By default anything viewed along the path counts. With `view` (a
    callable from configuration to CellSet) only the final configuration's
    own view counts, which makes the accepted configuration a viewpoint;
    configurations in `rejected` are never accepted then.
    """

    needs_vision = True

    def __init__(self, target, view=None, rejected=frozenset()):
        self.target = target
        self.bits = target.bits()
        self.view = view
        self.rejected = frozenset(rejected)

    def accepts(self, q, seen):
        if self.view is None:
            return bool(seen & self.bits)
        if q in self.rejected:
            return False
        return not self.view(q).isdisjoint(self.target)

    def signature(self):
        return ('view', self.target.digest_bytes(), self.view is not None, self.rejected)


def region_goal(cells):
    return RegionGoal(cells)


def config_goal(q):
    return ConfigGoal(q)


def view_goal(cells):
    return ViewGoal(cells)


# heuristics

class Heuristic:
    """Estimate over (configuration, inherited visibility)"""

    needs_vision = False

    def __call__(self, q, seen=0):
        raise NotImplementedError


class ZeroHeuristic(Heuristic):

    def __call__(self, q, seen=0):
        return 0


class ChebyshevHeuristic(Heuristic):
    """Chessboard distance to the nearest goal cell.

    Admissible and consistent for unit-cost moves in 8 directions.
    """

    def __init__(self, cells):
        self.goal = [tuple(c) for c in cells]

    def __call__(self, q, seen=0):
        x, y = q.cell
        return min(max(abs(x - gx), abs(y - gy)) for gx, gy in self.goal)


class FieldHeuristic(Heuristic):
    """Minimum of a scalar field over everything the path has viewed"""

    needs_vision = True

    def __init__(self, field_):
        self.field = field_
        values = field_.flat
        finite = [int(v) for v in np.unique(values[values != UNREACHABLE])]
        self.fallback = (finite[-1] + 1) if finite else 1
        self.levels = finite
        # bits of cells with value <= levels[i]
        self.level_bits = []
        acc = 0
        for level in finite:
            acc |= CellSet.from_flat(field_.dims, values == level).bits()
            self.level_bits.append(acc)

    def __call__(self, q, seen=0):
        if isinstance(seen, CellSet):
            seen = seen.bits()
        if not self.levels or not (seen & self.level_bits[-1]):
            return self.fallback
        lo, hi = 0, len(self.levels) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if seen & self.level_bits[mid]:
                hi = mid
            else:
                lo = mid + 1
        return self.levels[lo]


def field_heuristic(F):
    return FieldHeuristic(F)


def default_heuristic(goal):
    if isinstance(goal, RegionGoal):
        return ChebyshevHeuristic(list(goal.cells))
    if isinstance(goal, ConfigGoal):
        return ChebyshevHeuristic([goal.config.cell])
    return ZeroHeuristic()


def path_vision(path, belief, see_through=False):
    """Union of simulated views along a configuration path"""

    seen = CellSet.empty(belief.dims)
    for q in path:
        seen = seen | belief.view_from(q, see_through)
    return seen


class _VisionCache:

    def __init__(self, belief, see_through):
        self.belief = belief
        self.see_through = see_through
        self.bits = {}

    def __call__(self, q):
        bits = self.bits.get(q)
        if bits is None:
            bits = self.belief.view_from(q, self.see_through).bits()
            self.bits[q] = bits
        return bits


def va_star(start, goal, belief, mode=SearchMode(), h=None, budget=DEFAULT_NODE_BUDGET,
            actions=MOTIONS):
    """Best-first search over configurations with path-dependent visibility.

    A state is a configuration (cell, heading, attachment). The first
    expansion of a state fixes its path and the visibility inherited along
    it. Under enforced visibility a successor is admissible only when all
    its body cells (robot and carried object) are viewed in the belief,
    viewed along the path, or known movable cells.

    Parameters
    ----------
    start : Configuration
    goal : GoalPredicate
    belief : BeliefGrids
    mode : SearchMode
    h : Heuristic, optional
        defaults to Chebyshev distance for region and configuration goals
    budget : int
        maximum node expansions
    actions : sequence of Action
        successor actions, motions only by default

    Returns
    -------
    Plan or Failure
    """

    if h is None:
        h = default_heuristic(goal)
    model = ActionModel(belief.robot)
    occ = belief.occupancy(movables_block=mode.movables, forbidden=mode.forbidden)
    width = belief.dims.width

    first = model.settle(start, occ)
    if isinstance(first, RejectedAction):
        logger.debug('Search start %s is not admissible: %s', start, first)
        return Failure(INVALID_START, 0)

    track = mode.visibility or goal.needs_vision or h.needs_vision
    vision = _VisionCache(belief, mode.see_through_movables) if track else None
    allowed = (belief.viewed | belief.movable_cells()).bits() if mode.visibility else 0

    start_seen = vision(start) if track else 0
    counter = itertools.count()
    root = SearchNode(start, 0, start_seen, None, None)
    frontier = [(h(start, start_seen), next(counter), root)]
    best_g = {start: 0}
    closed = set()
    expanded = 0

    while frontier:
        _, _, node = heapq.heappop(frontier)
        q = node.config
        if q in closed:
            continue
        if goal.accepts(q, node.seen):
            return _reconstruct(node, expanded, belief.dims if track else None)
        if expanded >= budget:
            logger.debug('Search budget of %d expansions exceeded', budget)
            return Failure(BUDGET_EXCEEDED, expanded)
        closed.add(q)
        expanded += 1

        known = allowed | node.seen
        for action in actions:
            outcome = model.apply(q, action, occ)
            if isinstance(outcome, RejectedAction):
                continue
            nq = outcome.config
            if nq in closed:
                continue
            g = node.g + action.cost
            if g >= best_g.get(nq, UNREACHABLE):
                continue
            if mode.visibility and not _all_known(outcome, known, width):
                continue
            seen = (node.seen | vision(nq)) if track else 0
            best_g[nq] = g
            child = SearchNode(nq, g, seen, node, action)
            heapq.heappush(frontier, (g + h(nq, seen), next(counter), child))

    logger.debug('Search space exhausted after %d expansions', expanded)
    return Failure(EXHAUSTED, expanded)


def _all_known(outcome, known, width):
    for x, y in outcome.robot_cells:
        if not (known >> (y * width + x)) & 1:
            return False
    for x, y in outcome.object_cells:
        if not (known >> (y * width + x)) & 1:
            return False
    return True


def _reconstruct(node, expanded, dims):
    actions = []
    configs = []
    end = node
    while node is not None:
        configs.append(node.config)
        if node.action is not None:
            actions.append(node.action)
        node = node.parent
    actions.reverse()
    configs.reverse()
    seen = CellSet.from_bits(dims, end.seen) if dims is not None else None
    return Plan(actions, configs, end.g, expanded, seen)
