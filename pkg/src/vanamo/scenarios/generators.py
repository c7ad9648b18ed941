"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging

import numpy as np

from vanamo.geometry import Cell, CellSet, Footprint, GridDims
from vanamo.sim import Configuration, MovableObject, observe, parse_script
from vanamo.sim.actions import PUSH
from vanamo.planning import (ConfigGoal, Failure, PlannerConfig, PlanRequest, RegionGoal, SearchMode, ViewGoal,
                             VaStarOnly, LambPlanner, va_star)
from vanamo.scenarios.scenario import Category, DEFAULT_DIMS, Scenario

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 32

# smallest (width, height) each layout fits in
MIN_DIMS = {
    Category.SIMPLE_NAVIGATION: (14, 10),
    Category.VISIBILITY: (16, 12),
    Category.MOVABLE_OBSTACLES: (12, 13),
    Category.OBSTRUCTED_VISIBILITY: (16, 12),
    Category.OCCLUDING_OBSTACLES: (18, 19),
    Category.OBSTRUCTED_AFFORDANCE: (18, 19),
}

HEADING_NORTH = 2
WIDE = Footprint([(-1, 0), (0, 0), (1, 0)])


class GenerationExhausted(RuntimeError):
    """Every attempt for one (category, seed) failed a post-check"""

    def __init__(self, category, seed, check, attempts):
        super().__init__(f'No {category} scenario for seed {seed} after {attempts} attempts; '
                         f'last violated check: {check}')
        self.category = category
        self.seed = seed
        self.check = check
        self.attempts = attempts


class _Sketch:
    """Static mask, objects, witness script and helpers for building a layout.

    `solid` starts from rock to carve rooms out of; `border` walls the grid
    edge in.
    """

    def __init__(self, dims, solid=False, border=True):
        self.dims = dims
        self.static = np.full(dims.shape, solid, dtype=bool)
        if border:
            self.static[0, :] = self.static[-1, :] = True
            self.static[:, 0] = self.static[:, -1] = True
        self.objects = []
        self.script = []

    def fill(self, x0, x1, y0, y1, value=True):
        """Set the inclusive block [x0, x1] x [y0, y1]"""
        self.static[y0:y1 + 1, x0:x1 + 1] = value

    def carve(self, x0, x1, y0, y1):
        self.fill(x0, x1, y0, y1, False)

    def add(self, object_id, footprint, x, y):
        self.objects.append(MovableObject(object_id, footprint, Cell(x, y), 0))

    def act(self, tokens, times=1):
        self.script.extend(tokens.split() * times)

    def scenario(self, start, goal_cells, category, seed):
        scenario = Scenario(self.dims, CellSet(self.dims, self.static.copy()), tuple(self.objects), start,
                            CellSet.from_cells(self.dims, goal_cells), category=category, seed=seed)
        return scenario, ' '.join(self.script)


def _between(rng, lo, hi):
    """Uniform integer in [lo, hi]"""
    return int(rng.integers(lo, hi + 1))


def _block(x0, x1, y0, y1):
    return [(x, y) for x in range(x0, x1 + 1) for y in range(y0, y1 + 1)]


def _front_wall(rng, dims, x0, slack=0, lowest=0, highest=None):
    """Row of the wall ahead of a robot starting at (x0, 0) facing north.

    The whole row lies inside the start view once it is further away than
    any of its cells is to the side.
    """

    near = max(x0, dims.width - 1 - x0) + 1
    highest = dims.height - 1 if highest is None else highest
    yw = max(near, lowest) + _between(rng, 0, slack)
    if yw > highest:
        raise ValueError(f'front wall at row {yw} does not fit below row {highest}')
    return yw


# layouts

def _simple_navigation(rng, dims, seed):
    """Walled room with a few pillars; the goal lies straight ahead of the robot"""

    W, H = dims.width, dims.height
    sketch = _Sketch(dims)
    xs, ys = _between(rng, 2, 4), _between(rng, 2, H - 3)
    xg = _between(rng, W - 5, W - 3)
    goal = [c for c in _block(xg, xg + 2, ys - 1, ys + 1) if 1 <= c[1] <= H - 2 and c[0] <= W - 2]

    # pillars stay out of the rows the robot sweeps and away from the goal
    lane = set(_block(1, W - 2, ys - 2, ys + 2))
    for _ in range(_between(rng, 2, 4)):
        w, h = _between(rng, 1, 2), _between(rng, 1, 3)
        x0 = _between(rng, xs + 3, max(xs + 3, xg - 2 - w))
        y0 = _between(rng, 1, H - 1 - h)
        cells = _block(x0, x0 + w - 1, y0, y0 + h - 1)
        if lane.isdisjoint(cells):
            sketch.fill(x0, x0 + w - 1, y0, y0 + h - 1)
    sketch.act('F', xg - xs)
    return sketch.scenario(Configuration(Cell(xs, ys), 0), goal, Category.SIMPLE_NAVIGATION, seed)


def _hallway(rng, dims, seed, obstructed):
    """Open yard below solid rock, with a one-cell hallway cut east through the rock.

    The robot reaches the hallway through a three-cell vestibule in the
    front wall, but can only enter it sideways. The hallway can be seen
    from one spot only: facing east from a dead-end niche above the
    vestibule. With `obstructed`, a box fills the niche.
    """

    W, H = dims.width, dims.height
    sketch = _Sketch(dims, solid=True, border=False)
    x0 = W // 2 + _between(rng, -1, 1)
    yw = H - 3 - _between(rng, 0, 1)
    if yw <= max(x0, W - 1 - x0):
        raise ValueError(f'front wall at row {yw} is not in view')
    hy = yw + 1
    east = W - 1 - _between(rng, 0, 1)
    if east - 2 < x0 + 5:
        raise ValueError('hallway too short to hide its end')

    sketch.carve(0, W - 1, 0, yw - 1)
    sketch.carve(x0 - 1, x0 + 1, yw, hy)
    sketch.carve(x0 + 2, east, hy, hy)
    sketch.carve(x0, x0, hy + 1, hy + 1)
    goal = [(x, hy) for x in range(east - 2, east + 1)]

    if obstructed:
        sketch.add('box', Footprint.single(), x0, hy + 1)
        sketch.act('F', hy)
        sketch.act('PICK:box B B B SL SL PLACE SR SR F F')
    else:
        sketch.act('F', yw)
    # look down the hallway from the niche, come back and slide in
    sketch.act('RR RR SL SR RL RL F')
    sketch.act('SR', east - 1 - x0)
    category = Category.OBSTRUCTED_VISIBILITY if obstructed else Category.VISIBILITY
    return sketch.scenario(Configuration(Cell(x0, 0), HEADING_NORTH), goal, category, seed)


def _visibility(rng, dims, seed):
    return _hallway(rng, dims, seed, obstructed=False)


def _obstructed_visibility(rng, dims, seed):
    return _hallway(rng, dims, seed, obstructed=True)


def _movable_obstacles(rng, dims, seed):
    """Open yard and a thick wall with a one-cell gap; a box stands in front of the gap"""

    W, H = dims.width, dims.height
    sketch = _Sketch(dims, border=False)
    x0 = W // 2 + _between(rng, -1, 1)
    yw = _front_wall(rng, dims, x0, slack=2, lowest=6, highest=H - 5)

    sketch.fill(0, W - 1, yw, yw + 1)
    sketch.carve(x0, x0, yw, yw + 1)
    sketch.add('box', Footprint.single(), x0, yw - 1)
    goal = _block(x0 - 1, x0 + 1, yw + 2, yw + 4)

    sketch.act('F', yw - 2)
    sketch.act('PICK:box B B SL SL PLACE SR SR RR RR')
    sketch.act('SL', 6)
    return sketch.scenario(Configuration(Cell(x0, 0), HEADING_NORTH), goal, Category.MOVABLE_OBSTACLES, seed)


def _plank_in_shaft(rng, dims, plank):
    """Open yard below rock; a plank seals the shaft that leads up to the goal.

    Seen from the yard the shaft starts at a three-cell mouth in the front
    wall, with the plank one row up. West of the shaft a one-cell slot is
    the only place to push the plank from: east, into a pocket cut into
    the rock. The pocket can be seen only through a one-cell window from a
    notch further east in the front wall.

    Returns the sketch, the mouth column and the front wall row; the caller
    adds what blocks the solution.
    """

    W, H = dims.width, dims.height
    sketch = _Sketch(dims, solid=True, border=False)
    x0 = W // 2 + _between(rng, -1, 1)
    if x0 - 5 < 0 or x0 + 9 > W - 1:
        raise ValueError(f'shaft at column {x0} leaves no room for the slot and the notch')
    yw = _front_wall(rng, dims, x0, slack=1, lowest=6, highest=H - 8)
    yb = yw + 1

    sketch.carve(0, W - 1, 0, yw - 1)
    sketch.carve(x0 - 2, x0 - 2, yw, yb + 2)
    sketch.carve(x0 - 1, x0 + 1, yw, H - 1)
    sketch.carve(x0 + 2, x0 + 5, yb, yb)
    sketch.carve(x0 + 6, x0 + 8, yw, yb + 1)
    sketch.add(plank, WIDE, x0, yb)
    return sketch, x0, yw


def _occluding_obstacles(rng, dims, seed):
    """A small box in the notch hides the pocket the plank must be pushed into.

    Carry the small box off, look through the window, then push the wide
    plank into the pocket.
    """

    H = dims.height
    sketch, x0, yw = _plank_in_shaft(rng, dims, 'wide')
    sketch.add('small', Footprint.single(), x0 + 6, yw + 1)
    goal = _block(x0 - 1, x0 + 1, H - 3, H - 1)

    # the slot: look at the shaft above the plank
    sketch.act('F', yw - 3)
    sketch.act('RR RR B B')
    sketch.act('SL', 5)
    sketch.act('SR', 5)
    # the notch: carry the small box out, look north, then west through the window
    sketch.act('F', 9)
    sketch.act('RL RL RL RL')
    sketch.act('SR', 4)
    sketch.act('PICK:small SL SL SL B B PLACE SL SL F F F RR RR RL RL')
    sketch.act('SR', 5)
    sketch.act('SL', 5)
    # back to the slot and push
    sketch.act('F', 8)
    sketch.act('RL RL RL RL')
    sketch.act('SL', 5)
    sketch.act('PUSH PUSH PUSH B RL RL')
    sketch.act('F', H - 4 - yw)
    return sketch.scenario(Configuration(Cell(x0, 0), HEADING_NORTH), goal, Category.OCCLUDING_OBSTACLES, seed)


def _obstructed_affordance(rng, dims, seed):
    """A chair stands in the mouth of the slot, the only place the table can be pushed from.

    Pushing the table north keeps the shaft sealed and runs into cells
    nobody has seen; the pocket is in view from the notch. Carry the chair
    away, look, push the table into the pocket, go.
    """

    H = dims.height
    sketch, x0, yw = _plank_in_shaft(rng, dims, 'table')
    sketch.add('chair', Footprint.single(), x0 - 2, yw - 1)
    goal = _block(x0 - 1, x0 + 1, H - 3, H - 1)

    sketch.act('F', yw - 2)
    sketch.act('SL SL PICK:chair B B SL SL PLACE B RR RR')
    sketch.act('F', 10)
    sketch.act('RL RL RL RL')
    sketch.act('SR', 6)
    sketch.act('SL', 6)
    sketch.act('F', 8)
    sketch.act('RL RL RL RL')
    sketch.act('SL', 7)
    sketch.act('SR PUSH PUSH PUSH B RL RL')
    sketch.act('F', H - 4 - yw)
    return sketch.scenario(Configuration(Cell(x0, 0), HEADING_NORTH), goal, Category.OBSTRUCTED_AFFORDANCE,
                           seed)


LAYOUTS = {
    Category.SIMPLE_NAVIGATION: _simple_navigation,
    Category.VISIBILITY: _visibility,
    Category.MOVABLE_OBSTACLES: _movable_obstacles,
    Category.OBSTRUCTED_VISIBILITY: _obstructed_visibility,
    Category.OCCLUDING_OBSTACLES: _occluding_obstacles,
    Category.OBSTRUCTED_AFFORDANCE: _obstructed_affordance,
}


# post-checks: None when the scenario passes, else the violated check

def _reaches(belief, start, goal, mode, config):
    return not isinstance(va_star(start, goal, belief, mode, budget=config.node_budget), Failure)


def _without(belief, object_id):
    return belief.with_objects({k: v for k, v in belief.objects.items() if k != object_id})


def _check_simple_navigation(scenario, config):
    goal = RegionGoal(scenario.goal)
    if VaStarOnly(config).plan(scenario.start, goal, scenario.omniscient_belief()) is None:
        return 'va-star-only fails with omniscient visibility'
    if VaStarOnly(config).plan(scenario.start, goal, scenario.initial_belief()) is None:
        return 'va-star-only fails from the initial view'
    return None


def _goal_viewpoint(belief, scenario, config):
    """True when some reachable configuration sees a goal cell from where it stands"""

    goal = ViewGoal(scenario.goal, view=belief.view_from)
    return _reaches(belief, scenario.start, goal, SearchMode.visibility_relaxed(), config)


def _check_hallway(scenario, config):
    belief = scenario.initial_belief()
    goal = RegionGoal(scenario.goal)
    if VaStarOnly(config).plan(scenario.start, goal, belief) is not None:
        return 'direct visibility-enforced path exists'
    if not _reaches(belief, scenario.start, goal, SearchMode.visibility_relaxed(), config):
        return 'visibility-relaxed path missing'
    known = scenario.omniscient_belief()
    if scenario.objects:
        if _goal_viewpoint(known, scenario, config):
            return 'goal can be looked at without moving the box'
        known = _without(known, 'box')
    if not _goal_viewpoint(known, scenario, config):
        return 'no viewpoint on the goal'
    return None


def _check_movable_obstacles(scenario, config):
    sighted = observe(scenario.to_world()).sightings
    hidden = [obj.id for obj in scenario.objects if obj.id not in sighted]
    if hidden:
        return f'movables not visible from the start: {", ".join(hidden)}'
    known = scenario.omniscient_belief()
    goal = RegionGoal(scenario.goal)
    if _reaches(known, scenario.start, goal, SearchMode.direct(), config):
        return 'direct path not blocked'
    if not _reaches(_without(known, 'box'), scenario.start, goal, SearchMode.direct(), config):
        return 'removing the box does not open a path'
    return None


def _pushes(belief, scenario, object_id, config):
    req = PlanRequest(scenario.start, RegionGoal(scenario.goal), belief, 0)
    return [c for c in LambPlanner(config).sample_manip(object_id, req) if c.kind == PUSH]


def _cleared_by_push(belief, scenario, object_id, config):
    """True when some push of `object_id` from a reachable contact opens a direct path"""

    goal = RegionGoal(scenario.goal)
    for cand in _pushes(belief, scenario, object_id, config):
        if not _reaches(belief, scenario.start, ConfigGoal(cand.pre), SearchMode.direct(), config):
            continue
        after = belief.with_objects({**belief.objects, object_id: cand.result})
        if _reaches(after, cand.post, goal, SearchMode.direct(), config):
            return True
    return False


def _check_occluding_obstacles(scenario, config):
    known = scenario.omniscient_belief()
    if _reaches(known, scenario.start, RegionGoal(scenario.goal), SearchMode.direct(), config):
        return 'direct path not blocked'
    world = scenario.to_world()
    wide = scenario.object('wide')
    pushes = _pushes(known, scenario, wide.id, config)
    if not pushes:
        return 'wide object cannot be pushed'
    for cand in pushes:
        region = cand.object_swept - CellSet.from_cells(scenario.dims, wide.cells)
        if region.issubset(observe(world, cand.pre).viewed):
            return f'push region visible from contact pose {cand.pre}'
    if not _cleared_by_push(known, scenario, wide.id, config):
        return 'no push of the wide object opens a path'
    return None


def _check_obstructed_affordance(scenario, config):
    known = scenario.omniscient_belief()
    if _reaches(known, scenario.start, RegionGoal(scenario.goal), SearchMode.direct(), config):
        return 'direct path not blocked'
    if _cleared_by_push(known, scenario, 'table', config):
        return 'table can be pushed clear directly'
    if not _cleared_by_push(_without(known, 'chair'), scenario, 'table', config):
        return 'moving the chair does not free a push'
    return None


CHECKS = {
    Category.SIMPLE_NAVIGATION: _check_simple_navigation,
    Category.VISIBILITY: _check_hallway,
    Category.MOVABLE_OBSTACLES: _check_movable_obstacles,
    Category.OBSTRUCTED_VISIBILITY: _check_hallway,
    Category.OCCLUDING_OBSTACLES: _check_occluding_obstacles,
    Category.OBSTRUCTED_AFFORDANCE: _check_obstructed_affordance,
}


def generate(category, seed, dims=DEFAULT_DIMS, config=None, max_attempts=MAX_ATTEMPTS):
    """Seeded scenario of one category with a replay-checked witness.

    Each attempt draws a layout with `numpy.random.default_rng([seed,
    attempt])`, runs the category's post-check and replays the layout's
    scripted witness; rejected attempts are logged and redrawn.

    Parameters
    ----------
    category : Category or str
    seed : int
        non-negative
    dims : GridDims or (width, height)
        at least MIN_DIMS[category]
    config : PlannerConfig, optional
        budgets for the post-check searches
    max_attempts : int

    Raises
    ------
    GenerationExhausted
        no attempt passed; names the last violated check
    """

    category = Category.parse(category)
    if not isinstance(dims, GridDims):
        dims = GridDims(*dims)
    if seed < 0:
        raise ValueError(f'Seed must be non-negative, got {seed}')
    min_w, min_h = MIN_DIMS[category]
    if dims.width < min_w or dims.height < min_h:
        raise ValueError(f'{category} needs at least {min_w}x{min_h} cells, got {dims.width}x{dims.height}')
    config = config if config is not None else PlannerConfig()

    check = None
    for attempt in range(max_attempts):
        rng = np.random.default_rng([seed, attempt])
        try:
            scenario, script = LAYOUTS[category](rng, dims, seed)
        except ValueError as err:
            check = f'layout: {err}'
        else:
            check = CHECKS[category](scenario, config)
            if check is None:
                scenario = scenario.with_witness(parse_script(script))
                if scenario.witness_reaches_goal():
                    logger.debug('Generated %s on attempt %d', category, attempt)
                    return scenario
                check = 'witness does not reach the goal'
        logger.info('Rejected %s seed %d attempt %d: %s', category, seed, attempt, check)
    raise GenerationExhausted(category, seed, check, max_attempts)
