"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import replace
from enum import Enum

from vanamo.geometry import CellSet
from vanamo.planning.lamb import (LambPlan, LambPlanner, PlannerConfig, PlannerStats, PlanRequest, Segment,
                                  NAVIGATE, MANIP_PRE, MANIP_MID, MANIP_POST,
                                  UNSOLVABLE, BUDGET_EXHAUSTED, DEPTH_EXHAUSTED, collisions)
from vanamo.planning.search import (SearchMode, ConfigGoal, RegionGoal, GoalPredicate, Failure,
                                    ChebyshevHeuristic)
from vanamo.sim.belief import PoseConflict

logger = logging.getLogger(__name__)


class PlannerKind(str, Enum):
    LAMB = 'lamb'
    VA_STAR_ONLY = 'vastar'
    CONSTRAINED_NAMO = 'namo'
    FO_NAMO = 'fonamo'
    VAMP = 'vamp'

    def __str__(self):
        return self.value


def as_goal(goal):
    """GoalPredicate from a GoalRegion, a CellSet or a predicate"""

    if isinstance(goal, GoalPredicate):
        return goal
    if isinstance(goal, CellSet):
        return RegionGoal(goal)
    return RegionGoal(goal.cells)


class Planner(ABC):
    """ Abstract class for everything the harness can plan with.

    Subclasses implement `solve(req)` with the signature of `lamb`: a
    PlanRequest in, a LambPlan or None out. `respects_visibility` tells the
    harness whether plans are revalidated against the viewed cells.
    """

    kind = None
    respects_visibility = True

    def __init__(self, config=None):
        self.config = config if config is not None else PlannerConfig()
        self.stats = PlannerStats()

    def plan(self, start, goal, belief):
        """Plan from `start` to `goal` (GoalRegion, CellSet or predicate)"""

        req = PlanRequest(start, as_goal(goal), belief, self.config.depth)
        self.stats = PlannerStats()
        result = self.solve(req)
        if result is None and self.stats.failure is None:
            if self.stats.budget_hit:
                self.stats.failure = BUDGET_EXHAUSTED
            elif self.stats.depth_hit:
                self.stats.failure = DEPTH_EXHAUSTED
            else:
                self.stats.failure = UNSOLVABLE
        return result

    @abstractmethod
    def solve(self, req):
        pass

    def _worker(self, config=None):
        """LambPlanner sharing this planner's stats and budget"""
        worker = LambPlanner(config if config is not None else self.config)
        worker.stats = self.stats
        return worker

    def __str__(self):
        return f'{type(self).__name__} ({self.kind})'


class Lamb(Planner):

    kind = PlannerKind.LAMB

    def solve(self, req):
        worker = self._worker()
        result = worker.lamb(req)
        if result is not None:
            logger.debug('%s planned %s', self, result)
        return result


class Vamp(Lamb):
    """LaMB without the collision-relaxed branch"""

    kind = PlannerKind.VAMP

    def _worker(self, config=None):
        return super()._worker(replace(self.config, manipulation=False))


class VaStarOnly(Planner):
    """One direct search with the chessboard distance to the goal as heuristic"""

    kind = PlannerKind.VA_STAR_ONLY

    def solve(self, req):
        worker = self._worker()
        h = None
        if isinstance(req.goal, RegionGoal):
            h = ChebyshevHeuristic(list(req.goal.cells))
        plan = worker.search(req.start, req.goal, req.belief, SearchMode.direct(req.forbidden), h)
        if isinstance(plan, Failure):
            return None
        return worker.navigation_plan(plan, req.belief)


class ConstrainedNamo(Planner):
    """Move one known object at a time, and only when that opens a path.

    Each round tries the direct search; when it fails, objects are removed
    tentatively one at a time (ids in order) and the first whose removal
    makes the goal reachable is moved with a direct approach leg and a fully
    viewed macro. No viewpoint subgoals and
    no recursion.
    """

    kind = PlannerKind.CONSTRAINED_NAMO

    def solve(self, req):
        worker = self._worker()
        belief = req.belief
        q = req.start
        legs = []
        moved = set()

        for _ in range(len(belief.objects) + 1):
            direct = worker.search(q, req.goal, belief, SearchMode.direct(req.forbidden))
            if not isinstance(direct, Failure):
                legs.append(worker.navigation_plan(direct, belief, MANIP_POST if legs else NAVIGATE))
                return LambPlan.join(legs)
            step = None
            for oid in sorted(belief.objects):
                if oid in moved:
                    continue
                step = self._try_object(worker, req, q, belief, oid)
                if step is not None:
                    break
            if step is None:
                logger.debug('No object improves the path from %s', q)
                return None
            pre, macro = step
            legs.extend([pre, macro])
            belief = macro.apply(pre.apply(belief))
            q = macro.final
            moved.update(macro.moves)
        return None

    def _try_object(self, worker, req, q, belief, oid):
        obj = belief.objects[oid]
        others = {k: v for k, v in belief.objects.items() if k != oid}
        without = belief.with_objects(others).with_viewed(CellSet.from_cells(belief.dims, obj.cells))
        trial = worker.search(q, req.goal, without, SearchMode.direct(req.forbidden))
        if isinstance(trial, Failure):
            return None

        sub = PlanRequest(q, req.goal, belief, 0, req.forbidden)
        for cand in worker.sample_manip(oid, sub, trial):
            if cand.blockers:
                continue
            sim = worker.simulate_macro(cand, belief, req.forbidden)
            if sim is None or sim.unviewed:
                continue
            approach = worker.search(q, ConfigGoal(cand.pre), belief, SearchMode.direct(req.forbidden))
            if isinstance(approach, Failure):
                continue
            pre = worker.navigation_plan(approach, belief, MANIP_PRE)
            macro = LambPlan([_segment(MANIP_MID, cand.actions, sim.configs)], sim.viewed,
                             {oid: sim.result})
            logger.debug('Moving %s opens a path of cost %s', oid, trial.cost)
            return pre, macro
        return None


class FoNamo(Planner):
    """Navigation among movable obstacles that assumes unviewed space is free.

    Searches ignore the viewed cells, so motions and pushes may enter
    unknown space. Placements for picked objects still come from the
    viewed free cells of the belief. Depth-first over the objects a
    collision-relaxed plan runs into, last one first; the approach to each
    manipulation may move other objects, but not onto the macro's sweep.
    """

    kind = PlannerKind.FO_NAMO
    respects_visibility = False

    def solve(self, req):
        worker = self._worker()
        return self._dfs(worker, req.start, req.goal, req.belief, req.forbidden, frozenset(), req.depth,
                         req.keep_clear)

    def _dfs(self, worker, q, goal, belief, forbidden, excluded, depth, keep_clear=frozenset()):
        direct = worker.search(q, goal, belief, SearchMode(False, True, forbidden))
        if not isinstance(direct, Failure):
            return worker.navigation_plan(direct, belief)
        if depth == 0:
            self.stats.depth_hit = True
            return None
        solid = forbidden | frozenset(c for oid in excluded for c in belief.objects[oid].cells)
        relaxed = worker.search(q, goal, belief, SearchMode(False, False, solid))
        if isinstance(relaxed, Failure):
            return None

        for oid in reversed(collisions(relaxed, belief, exclude=excluded)):
            sub = PlanRequest(q, goal, belief, 0, forbidden, keep_clear=keep_clear)
            for cand in worker.sample_manip(oid, sub, relaxed):
                sweep = frozenset(cand.object_swept) | frozenset(cand.robot_swept)
                pre = self._dfs(worker, q, ConfigGoal(cand.pre), belief, forbidden, excluded | {oid}, depth - 1,
                                keep_clear | sweep)
                if pre is None:
                    continue
                try:
                    staged = pre.apply(belief)
                    sim = worker.simulate_macro(cand, staged, forbidden)
                    if sim is None:
                        continue
                    macro = LambPlan([_segment(MANIP_MID, cand.actions, sim.configs)], sim.viewed,
                                     {oid: sim.result})
                    after = macro.apply(staged)
                except PoseConflict:
                    continue
                post = self._dfs(worker, cand.post, goal, after, forbidden, excluded | {oid}, depth - 1, keep_clear)
                if post is None:
                    continue
                return LambPlan.join([pre.relabel(NAVIGATE, MANIP_PRE), macro,
                                      post.relabel(NAVIGATE, MANIP_POST)])
        return None


def _segment(kind, actions, configs):
    return Segment(kind, list(actions), list(configs))


PLANNERS = {
    PlannerKind.LAMB: Lamb,
    PlannerKind.VA_STAR_ONLY: VaStarOnly,
    PlannerKind.CONSTRAINED_NAMO: ConstrainedNamo,
    PlannerKind.FO_NAMO: FoNamo,
    PlannerKind.VAMP: Vamp,
}


def make_planner(kind, config=None):
    """Planner instance for a PlannerKind or its CLI name"""

    try:
        kind = PlannerKind(str(kind))
    except ValueError:
        raise ValueError(f'Unknown planner {kind!r}; choose from {", ".join(k.value for k in PlannerKind)}') from None
    return PLANNERS[kind](config)


def _entry(kind):
    def run(req, config=None):
        return PLANNERS[kind](config).solve(req)
    run.__name__ = f'plan_{kind.name.lower()}'
    return run


plan_va_star_only = _entry(PlannerKind.VA_STAR_ONLY)
plan_constrained_namo = _entry(PlannerKind.CONSTRAINED_NAMO)
plan_fo_namo = _entry(PlannerKind.FO_NAMO)
plan_vamp = _entry(PlannerKind.VAMP)
plan_lamb = _entry(PlannerKind.LAMB)
