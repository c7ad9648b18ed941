"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import pandas as pd

from vanamo.geometry import Cell, CellSet
from vanamo.planning import make_planner
from vanamo.sim import (Action, ActionModel, BeliefGrids, Configuration, Occupancy, RejectedAction, observe,
                        step, update_belief)

logger = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 1000
DEFAULT_TIME_BUDGET = 120.0

# EpisodeResult.failure_reason
TIMEOUT = 'timeout'
PLANNER_NONE = 'planner-none'
SAFETY_VIOLATION = 'safety-violation'
REJECTED_ACTION = 'rejected-action'
ERROR = 'error'

TRACE_COLUMNS = ['step', 'action', 'x', 'y', 'heading', 'holding', 'observation', 'viewed',
                 'replanned', 'expanded', 'depth', 'plan_time_ms']


class TraceReplayError(ValueError):
    """Trace that the simulator does not reproduce"""


class TraceStep(NamedTuple):
    """One executed action.

    `config` is the configuration after the action, `observation` the
    digest of the frame taken there and `viewed` the number of viewed cells
    in the belief after merging it. The planner columns describe the call
    that produced the action; they are zero when a cached plan was reused.
    """

    action: Action
    config: Configuration
    observation: str
    viewed: int
    replanned: bool = False
    expanded: int = 0
    depth: int = 0
    plan_time_ms: Optional[float] = None


@dataclass
class Trace:
    """Executed actions of one episode, with the configurations they led to"""

    start: Configuration
    observation: str
    viewed: int
    steps: list = field(default_factory=list)

    @property
    def actions(self):
        return [s.action for s in self.steps]

    @property
    def configs(self):
        return [self.start] + [s.config for s in self.steps]

    def __len__(self):
        return len(self.steps)

    def replay(self, scenario):
        """Worlds visited by the trace actions (start included).

        Raises
        ------
        TraceReplayError
            the scenario start differs, an action is rejected, or a
            configuration differs from the recorded one
        """

        if scenario.start != self.start:
            raise TraceReplayError(f'Trace starts at {self.start}, scenario at {scenario.start}')
        try:
            worlds = scenario.replay(self.actions)
        except ValueError as err:
            raise TraceReplayError(str(err)) from None
        for n, (world, s) in enumerate(zip(worlds[1:], self.steps)):
            if world.robot != s.config:
                raise TraceReplayError(f'Step {n} ({s.action.token()}) reaches {world.robot}, '
                                       f'trace says {s.config}')
        return worlds

    def to_frame(self):
        """One row per step; row 0 is the initial observation"""

        rows = [{'step': 0, 'action': '', 'x': self.start.cell.x, 'y': self.start.cell.y,
                 'heading': self.start.heading, 'holding': _holding(self.start),
                 'observation': self.observation, 'viewed': self.viewed, 'replanned': False,
                 'expanded': 0, 'depth': 0, 'plan_time_ms': None}]
        for n, s in enumerate(self.steps, start=1):
            rows.append({'step': n, 'action': s.action.token(), 'x': s.config.cell.x, 'y': s.config.cell.y,
                         'heading': s.config.heading, 'holding': _holding(s.config),
                         'observation': s.observation, 'viewed': s.viewed, 'replanned': s.replanned,
                         'expanded': s.expanded, 'depth': s.depth, 'plan_time_ms': s.plan_time_ms})
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def __str__(self):
        return f'Trace({len(self.steps)} steps from {self.start})'


def _holding(q):
    return q.attachment.object_id if q.attachment is not None else ''


def save_trace(trace, path):
    trace.to_frame().to_csv(path, index=False)
    return path


def load_trace(path, scenario):
    """Read a trace CSV and check it against `scenario` by replaying it.

    Raises
    ------
    TraceReplayError
        the file does not describe a replayable trace of `scenario`
    """

    df = pd.read_csv(path, keep_default_na=False, dtype={'action': str, 'holding': str, 'observation': str})
    missing = [c for c in TRACE_COLUMNS if c not in df.columns]
    if missing:
        raise TraceReplayError(f'{path} lacks trace columns {missing}')
    if len(df) == 0 or int(df['step'].iloc[0]) != 0:
        raise TraceReplayError(f'{path} has no initial row')

    first = df.iloc[0]
    start = Configuration(Cell(int(first['x']), int(first['y'])), int(first['heading']))
    try:
        actions = [Action.parse(tok) for tok in df['action'].iloc[1:]]
    except ValueError as err:
        raise TraceReplayError(f'{path}: {err}') from None
    if start != scenario.start:
        raise TraceReplayError(f'Trace starts at {start}, scenario at {scenario.start}')
    try:
        worlds = scenario.replay(actions)
    except ValueError as err:
        raise TraceReplayError(f'{path}: {err}') from None

    trace = Trace(start, str(first['observation']), int(first['viewed']))
    for action, world, (_, row) in zip(actions, worlds[1:], df.iloc[1:].iterrows()):
        q = world.robot
        if (q.cell.x, q.cell.y, q.heading) != (int(row['x']), int(row['y']), int(row['heading'])):
            raise TraceReplayError(f'Step {row["step"]} reaches {q}, file says '
                                   f'({row["x"]}, {row["y"]}) h{row["heading"]}')
        plan_time = row['plan_time_ms']
        trace.steps.append(TraceStep(action, q, str(row['observation']), int(row['viewed']),
                                     str(row['replanned']) == 'True', int(row['expanded']), int(row['depth']),
                                     float(plan_time) if plan_time != '' else None))
    return trace


@dataclass(frozen=True)
class EpisodeResult:
    """Outcome of one episode.

    `plan_time_ms` is the planner wall time summed over the episode; it is
    only recorded when timing is requested, so that results stay
    reproducible otherwise.
    """

    success: bool
    steps: int
    plan_time_ms: Optional[float] = None
    failure_reason: Optional[str] = None
    replans: int = 0

    def __str__(self):
        outcome = 'success' if self.success else f'failure ({self.failure_reason})'
        timing = f', {self.plan_time_ms:.1f} ms planning' if self.plan_time_ms is not None else ''
        return f'{outcome} after {self.steps} steps, {self.replans} plans{timing}'


def unsafe_cells(world, action, belief):
    """Cells the action would sweep that the belief neither viewed nor knows as movable.

    Motions are swept as if nothing blocked them, so that a move into an
    unseen obstacle still counts. Returns None when the action cannot be
    swept at all (it leaves the grid, or a manipulation precondition fails).
    """

    model = ActionModel(world.model)
    outcome = model.apply(world.robot, action, world.occupancy())
    if isinstance(outcome, RejectedAction) and action.is_motion:
        unblocked = Occupancy(world.dims, frozenset(), world.objects, movables_block=False)
        outcome = model.apply(world.robot, action, unblocked)
    if isinstance(outcome, RejectedAction):
        return None
    swept = CellSet.from_cells(world.dims, list(outcome.robot_cells) + list(outcome.object_cells))
    return swept - (belief.viewed | belief.movable_cells())


def still_valid(actions, q, belief, visibility=True):
    """Replay planned actions against the belief.

    Every action must be accepted by the action model over the known
    obstacles, with the objects the plan moves carried along. With
    `visibility`, every cell a body enters must be viewed, known movable,
    or predicted visible from an earlier configuration of the plan.
    """

    model = ActionModel(belief.robot)
    objects = dict(belief.objects)
    known = belief.viewed | belief.movable_cells()
    view = belief
    for action in actions:
        occ = Occupancy(belief.dims, belief.static_set, objects)
        if visibility:
            known = known | view.view_from(q)
        outcome = model.apply(q, action, occ)
        if isinstance(outcome, RejectedAction):
            logger.debug('Cached plan breaks at %s %s: %s', q, action, outcome)
            return False
        if visibility:
            body = CellSet.from_cells(belief.dims, list(outcome.robot_cells) + list(outcome.object_cells))
            if not body <= known:
                logger.debug('Cached plan enters unviewed cells at %s %s', q, action)
                return False
        if outcome.moved is not None and objects.get(outcome.moved.id) != outcome.moved:
            objects[outcome.moved.id] = outcome.moved
            known = known | CellSet.from_cells(belief.dims, outcome.moved.cells)
            view = belief.with_objects(objects)
        q = outcome.config
    return True


def run_episode(scenario, planner_kind, step_budget=DEFAULT_STEP_BUDGET, time_budget=DEFAULT_TIME_BUDGET,
                replan_every_step=False, config=None, timing=False):
    """Observe, update the belief, plan, and execute one action, until done.

    A cached plan is reused while it stays valid against the updated
    belief; otherwise (or on every step with `replan_every_step`) the
    planner is called again. Before each action the safety monitor checks
    that every cell the action sweeps is viewed or a known movable cell.

    Parameters
    ----------
    scenario : Scenario
    planner_kind : PlannerKind or str
    step_budget : int
        executed actions before the episode times out
    time_budget : float
        planner wall time (seconds) before the episode times out
    replan_every_step : bool
    config : PlannerConfig, optional
    timing : bool
        record planner wall times in the result and the trace

    Returns
    -------
    (EpisodeResult, Trace)
    """

    planner = make_planner(planner_kind, config)
    world = scenario.to_world()
    goal = world.goal
    obs = observe(world)
    belief = update_belief(BeliefGrids.empty(world.dims, world.model), obs)
    trace = Trace(world.robot, obs.digest(), len(belief.viewed))
    logger.info('Episode %s with %s', scenario, planner)

    plan = []
    spent = 0.0
    replans = 0

    def result(success, reason=None):
        plan_ms = round(spent * 1000.0, 3) if timing else None
        outcome = EpisodeResult(success, len(trace), plan_ms, reason, replans)
        if success:
            logger.info('Episode %s with %s: %s', scenario, planner, outcome)
        else:
            logger.info('Episode %s with %s failed: %s', scenario, planner, outcome)
        return outcome, trace

    while not world.at_goal():
        if len(trace) >= step_budget:
            return result(False, TIMEOUT)

        fresh = False
        stats = None
        call_ms = None
        if replan_every_step or not plan or not still_valid(plan, world.robot, belief,
                                                             planner.respects_visibility):
            if plan:
                logger.info('Replanning at %s: cached plan no longer valid', world.robot)
            tic = time.perf_counter()
            found = planner.plan(world.robot, goal, belief)
            elapsed = time.perf_counter() - tic
            spent += elapsed
            call_ms = round(elapsed * 1000.0, 3) if timing else None
            replans += 1
            stats = planner.stats
            fresh = True
            if found is None:
                logger.info('%s found no plan from %s (%s)', planner, world.robot, stats.failure)
                return result(False, PLANNER_NONE)
            plan = list(found.actions)
            logger.debug('Plan: %s', found)
            if time_budget is not None and spent > time_budget:
                return result(False, TIMEOUT)
            if not plan:
                # goal accepted by the planner but not by the world
                return result(False, PLANNER_NONE)

        action = plan.pop(0)
        unsafe = unsafe_cells(world, action, belief)
        if unsafe is None:
            outcome = RejectedAction('rejected', str(action))
        else:
            if unsafe:
                cell = next(iter(unsafe))
                logger.info('Safety violation: %s at %s enters unviewed cell (%d, %d)',
                            action, world.robot, cell.x, cell.y)
                return result(False, SAFETY_VIOLATION)
            outcome = step(world, action)

        if isinstance(outcome, RejectedAction):
            plan = []
            if fresh:
                logger.info('World rejected fresh action %s at %s', action, world.robot)
                return result(False, REJECTED_ACTION)
            logger.info('World rejected cached action %s at %s; replanning', action, world.robot)
            continue

        belief, obs = track(belief, world, outcome)
        world = outcome
        trace.steps.append(TraceStep(action, world.robot, obs.digest(), len(belief.viewed), fresh,
                                     stats.expanded if fresh else 0, stats.deepest if fresh else 0, call_ms))
        if time_budget is not None and spent > time_budget:
            return result(False, TIMEOUT)

    return result(True)


def track(belief, before, after):
    """Belief after an executed action: the manipulated object at its new pose, then the new frame."""

    moved = _moved_object(before, after)
    if moved is not None and moved.id in belief.objects:
        objects = dict(belief.objects)
        objects[moved.id] = moved
        belief = belief.with_objects(objects)
    obs = observe(after)
    return update_belief(belief, obs), obs


def _moved_object(before, after):
    """Object whose pose the last action changed, or None"""

    for oid, obj in after.objects.items():
        if before.objects[oid] is not obj:
            return obj
    return None
