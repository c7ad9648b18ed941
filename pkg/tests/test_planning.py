import heapq

import numpy as np
import pytest

from vanamo.geometry import Cell, CellSet, Footprint, GridDims, distance_field, swept_cells
from vanamo.planning import (ConfigGoal, ConstrainedNamo, Failure, FoNamo, Lamb, LambPlanner, PlannerConfig,
                             PlannerKind, PlanRequest, RegionGoal, SearchMode, VaStarOnly, Vamp, ViewGoal,
                             collisions, field_heuristic, first_collision, make_planner, path_vision, va_star)
from vanamo.planning.lamb import MANIP_MID, MANIP_POST, NAVIGATE, VIEW_SUBGOAL
from vanamo.planning.search import BUDGET_EXCEEDED, EXHAUSTED, INVALID_START
from vanamo.scenarios import bundled
from vanamo.sim import (ActionModel, BeliefGrids, Configuration, GoalRegion, MOTIONS, MovableObject, PoseConflict,
                        RejectedAction, RobotModel, WorldState, step)
from vanamo.sim.actions import PICK


def belief_of(dims, static=(), objects=(), width=1, viewed=None):
    model = RobotModel(Footprint.bar(width))
    viewed = CellSet.full(dims) if viewed is None else viewed
    return BeliefGrids(dims, model, viewed, CellSet.from_cells(dims, static), {o.id: o for o in objects})


def box(x, y, object_id='box'):
    return MovableObject(object_id, Footprint.single(), Cell(x, y))


def dijkstra_cost(start, goal_cells, belief):
    """Cheapest motion cost over configurations, or None"""

    model = ActionModel(belief.robot)
    occ = belief.occupancy()
    best = {start: 0}
    heap = [(0, 0, start)]
    counter = 1
    while heap:
        g, _, q = heapq.heappop(heap)
        if g > best[q]:
            continue
        if q.cell in goal_cells:
            return g
        for action in MOTIONS:
            outcome = model.apply(q, action, occ)
            if isinstance(outcome, RejectedAction):
                continue
            nq = outcome.config
            ng = g + action.cost
            if ng < best.get(nq, ng + 1):
                best[nq] = ng
                heapq.heappush(heap, (ng, counter, nq))
                counter += 1
    return None


def replay(world, actions):
    for action in actions:
        world = step(world, action)
        assert not isinstance(world, RejectedAction), world
    return world


# search

def test_va_star_matches_dijkstra_when_everything_is_viewed():
    rng = np.random.default_rng(5)
    dims = GridDims(16, 16)
    solved = 0
    while solved < 100:
        width = int(rng.choice([1, 3]))
        static = CellSet(dims, rng.random(dims.shape) < 0.15)
        belief = belief_of(dims, static, width=width)
        model = ActionModel(belief.robot)
        occ = belief.occupancy()
        start = Configuration(Cell(int(rng.integers(16)), int(rng.integers(16))), int(rng.integers(8)))
        goal = CellSet.from_cells(dims, [(int(rng.integers(16)), int(rng.integers(16)))])
        if isinstance(model.settle(start, occ), RejectedAction):
            continue
        expected = dijkstra_cost(start, goal, belief)
        if expected is None:
            continue
        plan = va_star(start, RegionGoal(goal), belief, SearchMode.visibility_relaxed())
        assert not isinstance(plan, Failure)
        assert plan.cost == expected
        assert len(plan.configs) == len(plan.actions) + 1
        solved += 1


def test_direct_search_needs_to_look_first():
    dims = GridDims(7, 3)
    belief = belief_of(dims, viewed=CellSet.empty(dims))
    start = Configuration(Cell(3, 1), 0)
    goal = RegionGoal(CellSet.from_cells(dims, [(0, 1)]))

    relaxed = va_star(start, goal, belief, SearchMode.visibility_relaxed())
    assert relaxed.cost == 3

    direct = va_star(start, goal, belief, SearchMode.direct())
    assert direct.cost > 3
    assert direct.actions[0].token() in ('RL', 'RR')
    assert direct.seen is not None and (0, 1) in direct.seen


def test_view_goal_accepts_once_seen():
    dims = GridDims(7, 3)
    belief = belief_of(dims, viewed=CellSet.empty(dims))
    plan = va_star(Configuration(Cell(3, 1), 0), ViewGoal(CellSet.from_cells(dims, [(0, 1)])), belief,
                   SearchMode.direct())
    assert plan.cost == 3
    assert {a.token() for a in plan.actions} <= {'RL', 'RR'}


def test_movables_block_only_when_enforced():
    dims = GridDims(7, 1)
    belief = belief_of(dims, objects=[box(4, 0)])
    start = Configuration(Cell(2, 0), 0)
    goal = RegionGoal(CellSet.from_cells(dims, [(6, 0)]))

    blocked = va_star(start, goal, belief, SearchMode.direct())
    assert isinstance(blocked, Failure)
    assert blocked.reason == EXHAUSTED

    relaxed = va_star(start, goal, belief, SearchMode.collision_relaxed())
    assert relaxed.cost == 4
    assert collisions(relaxed, belief) == ['box']


def test_forbidden_cells_and_budget():
    dims = GridDims(7, 1)
    belief = belief_of(dims)
    start = Configuration(Cell(0, 0), 0)
    goal = RegionGoal(CellSet.from_cells(dims, [(6, 0)]))
    assert va_star(start, goal, belief, SearchMode.direct({Cell(3, 0)})).reason == EXHAUSTED
    assert va_star(start, goal, belief, SearchMode.direct(), budget=1).reason == BUDGET_EXCEEDED
    assert va_star(Configuration(Cell(3, 0), 0), goal, belief_of(dims, static=[(3, 0)])).reason == INVALID_START


def test_config_goal_matches_heading():
    dims = GridDims(5, 5)
    belief = belief_of(dims)
    target = Configuration(Cell(2, 2), 4)
    plan = va_star(Configuration(Cell(2, 2), 0), ConfigGoal(target), belief, SearchMode.direct())
    assert plan.final == target
    assert plan.cost == 4


# planners

def doorway_world():
    """Wall at x = 4 with a one-cell doorway at y = 2 holding a box"""

    dims = GridDims(9, 5)
    static = [(4, y) for y in range(5) if y != 2]
    belief = belief_of(dims, static, [box(4, 2)])
    world = WorldState(dims, belief.static, dict(belief.objects), Configuration(Cell(1, 2), 0),
                       GoalRegion(CellSet.from_cells(dims, [(7, 2)])), belief.robot)
    return world, belief


def test_lamb_navigates_directly_when_it_can():
    dims = GridDims(8, 8)
    belief = belief_of(dims)
    plan = Lamb().plan(Configuration(Cell(1, 1), 0), CellSet.from_cells(dims, [(6, 6)]), belief)
    assert plan.kinds() == [NAVIGATE]
    assert plan.cost == 6


def test_lamb_clears_the_doorway():
    world, belief = doorway_world()
    planner = Lamb()
    plan = planner.plan(world.robot, world.goal, belief)
    assert plan is not None
    assert MANIP_MID in plan.kinds()
    assert replay(world, plan.actions).at_goal()
    assert planner.stats.searches > 1
    assert planner.stats.deepest >= 1


@pytest.mark.parametrize('planner_class', [VaStarOnly, Vamp])
def test_planners_without_manipulation_give_up(planner_class):
    world, belief = doorway_world()
    planner = planner_class()
    assert planner.plan(world.robot, world.goal, belief) is None
    assert planner.stats.failure in ('unsolvable', 'depth-exhausted')


@pytest.mark.parametrize('planner_class', [ConstrainedNamo, FoNamo])
def test_namo_baselines_clear_the_doorway(planner_class):
    world, belief = doorway_world()
    plan = planner_class().plan(world.robot, world.goal, belief)
    assert plan is not None
    assert replay(world, plan.actions).at_goal()


def test_sample_manip_offers_candidates():
    world, belief = doorway_world()
    worker = LambPlanner()
    req = PlanRequest(world.robot, RegionGoal(world.goal.cells), belief, 0)
    candidates = worker.sample_manip('box', req)
    assert candidates
    for cand in candidates:
        assert cand.object_id == 'box'
        assert cand.actions
        # replaying the macro from its start pose reproduces its result
        start = WorldState(world.dims, world.static, world.objects, cand.pre, world.goal, world.model)
        end = replay(start, cand.actions)
        assert end.robot == cand.post
        assert end.objects['box'] == cand.result


def test_make_planner():
    assert isinstance(make_planner('lamb'), Lamb)
    assert isinstance(make_planner(PlannerKind.FO_NAMO), FoNamo)
    assert not make_planner('fonamo').respects_visibility
    with pytest.raises(ValueError):
        make_planner('rrt')


def test_planner_config_validation():
    with pytest.raises(ValueError):
        PlannerConfig(node_budget=0)
    with pytest.raises(ValueError):
        PlannerConfig(depth=-1)
    world, belief = doorway_world()
    with pytest.raises(ValueError):
        PlanRequest(world.robot, RegionGoal(world.goal.cells), belief, -1)
    with pytest.raises(ValueError):
        PlanRequest(world.robot, RegionGoal(world.goal.cells), belief, 1, excluded=frozenset({'ghost'}))


# search invariants

def test_collisions_follow_first_contact():
    dims = GridDims(9, 1)
    belief = belief_of(dims, objects=[box(3, 0, 'zeta'), box(6, 0, 'alpha')])
    east = va_star(Configuration(Cell(1, 0), 0), RegionGoal(CellSet.from_cells(dims, [(8, 0)])), belief,
                   SearchMode.collision_relaxed())
    assert collisions(east, belief) == ['zeta', 'alpha']
    assert first_collision(east, belief) == 'zeta'
    assert first_collision(east, belief, exclude={'zeta'}) == 'alpha'

    west = va_star(Configuration(Cell(8, 0), 4), RegionGoal(CellSet.from_cells(dims, [(0, 0)])), belief,
                   SearchMode.collision_relaxed())
    assert collisions(west, belief) == ['alpha', 'zeta']
    assert first_collision(west, belief, exclude={'alpha', 'zeta'}) is None


def test_path_vision_accumulates_along_the_path():
    dims = GridDims(9, 9)
    belief = belief_of(dims, static=[(4, y) for y in range(2, 7)], viewed=CellSet.empty(dims))
    plan = va_star(Configuration(Cell(1, 4), 0), RegionGoal(CellSet.from_cells(dims, [(7, 4)])), belief,
                   SearchMode.direct())
    assert not isinstance(plan, Failure)
    views = [path_vision(plan.configs[:k], belief) for k in range(1, len(plan.configs) + 1)]
    for before, after, q in zip(views, views[1:], plan.configs[1:]):
        assert before <= after
        assert after == before | belief.view_from(q)
    assert views[-1] <= plan.seen


def bfs_distances(free, sources):
    """Reference 8-connected breadth-first distances, keyed by cell"""

    dist = {s: 0 for s in sources}
    frontier = list(sources)
    while frontier:
        nxt = []
        for x, y in frontier:
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    c = (x + dx, y + dy)
                    if c in free and c not in dist:
                        dist[c] = dist[(x, y)] + 1
                        nxt.append(c)
        frontier = nxt
    return dist


def test_field_heuristic_never_overestimates_the_seen_distance():
    rng = np.random.default_rng(11)
    dims = GridDims(12, 10)
    for _ in range(20):
        free_mask = rng.random(dims.shape) > 0.25
        free = CellSet(dims, free_mask)
        targets = [(int(rng.integers(12)), int(rng.integers(10))) for _ in range(2)]
        sources = CellSet.from_cells(dims, targets)
        h = field_heuristic(distance_field(free, sources))
        dist = bfs_distances({tuple(c) for c in free} | set(targets), targets)
        q = Configuration(Cell(0, 0), 0)

        seen = CellSet.empty(dims)
        last = h(q, seen)
        for _ in range(6):
            seen = seen | CellSet(dims, rng.random(dims.shape) < 0.05)
            value = h(q, seen)
            finite = [dist[tuple(c)] for c in seen if tuple(c) in dist]
            if finite:
                assert value == min(finite)
            assert value <= last
            last = value
        assert h(q, seen | sources) == 0


def test_view_goal_with_a_view_accepts_viewpoints_only():
    dims = GridDims(7, 3)
    belief = belief_of(dims, viewed=CellSet.empty(dims))
    target = CellSet.from_cells(dims, [(0, 1)])
    start = Configuration(Cell(3, 1), 0)
    first = va_star(start, ViewGoal(target, view=belief.view_from), belief, SearchMode.visibility_relaxed())
    assert not belief.view_from(first.final).isdisjoint(target)

    other = va_star(start, ViewGoal(target, view=belief.view_from, rejected={first.final}), belief,
                    SearchMode.visibility_relaxed())
    assert other.final != first.final
    assert not belief.view_from(other.final).isdisjoint(target)


def test_va_star_only_is_optimal_with_the_chessboard_heuristic():
    rng = np.random.default_rng(8)
    dims = GridDims(14, 14)
    solved = 0
    while solved < 20:
        belief = belief_of(dims, CellSet(dims, rng.random(dims.shape) < 0.2))
        start = Configuration(Cell(int(rng.integers(14)), int(rng.integers(14))), int(rng.integers(8)))
        goal = CellSet.from_cells(dims, [(int(rng.integers(14)), int(rng.integers(14)))])
        if start.cell in belief.static:
            continue
        expected = dijkstra_cost(start, goal, belief)
        if expected is None:
            continue
        plan = VaStarOnly().plan(start, goal, belief)
        assert plan is not None
        assert plan.cost == expected
        solved += 1


# manipulation sampling

def test_candidates_with_a_blocked_contact_name_the_blocker():
    world, belief = doorway_world()
    crowded = belief.with_objects({**belief.objects, 'crate': box(3, 2, 'crate')})
    req = PlanRequest(world.robot, RegionGoal(world.goal.cells), crowded, 0)
    candidates = LambPlanner().sample_manip('box', req)
    blocked = [c for c in candidates if c.blockers]
    assert blocked
    assert all(c.blockers == ('crate',) and c.pre == Configuration(Cell(3, 2), 0) for c in blocked)
    assert any(not c.blockers for c in candidates)
    assert [bool(c.blockers) for c in candidates] == sorted(bool(c.blockers) for c in candidates)


def test_candidates_stay_off_keep_clear_and_the_relaxed_path():
    world, belief = doorway_world()
    keep_clear = frozenset(Cell(x, y) for x in range(2, 4) for y in range(5))
    req = PlanRequest(world.robot, RegionGoal(world.goal.cells), belief, 0, keep_clear=keep_clear)
    relaxed = va_star(world.robot, RegionGoal(world.goal.cells), belief, SearchMode.collision_relaxed())
    path = swept_cells(belief.robot.footprint, relaxed.configs, belief.dims)
    candidates = LambPlanner().sample_manip('box', req, relaxed)
    assert candidates
    for cand in candidates:
        assert keep_clear.isdisjoint(cand.result.cells)
        if cand.kind == PICK:
            assert path.isdisjoint(CellSet.from_cells(belief.dims, cand.result.cells))


def test_candidates_that_sweep_unseen_cells_come_later():
    world, _ = doorway_world()
    dims = world.dims
    viewed = CellSet.from_cells(dims, [(x, y) for x in range(5) for y in range(5)])
    belief = belief_of(dims, [(4, y) for y in range(5) if y != 2], [box(4, 2)], viewed=viewed)
    req = PlanRequest(world.robot, RegionGoal(world.goal.cells), belief, 0)
    candidates = LambPlanner().sample_manip('box', req)
    known_free = viewed | CellSet.from_cells(dims, belief.objects['box'].cells)
    unseen = [not (CellSet.from_cells(dims, c.result.cells) | c.object_swept | c.robot_swept).issubset(known_free)
              for c in candidates]
    assert False in unseen and True in unseen
    assert unseen == sorted(unseen)


def test_carry_searches_aim_only_at_poses_that_fit(monkeypatch):
    world, belief = doorway_world()
    model = ActionModel(belief.robot)
    targets = []
    search = LambPlanner.search

    def recording(self, start, goal, belief, mode, h=None):
        if isinstance(goal, ConfigGoal):
            targets.append(goal.config)
        return search(self, start, goal, belief, mode, h)

    monkeypatch.setattr(LambPlanner, 'search', recording)
    req = PlanRequest(world.robot, RegionGoal(world.goal.cells), belief, 0)
    candidates = LambPlanner().sample_manip('box', req)
    assert any(c.kind == PICK for c in candidates)
    assert targets
    for q in targets:
        assert not isinstance(model.settle(q, belief.occupancy(True)), RejectedAction), q


# recursion

def test_keep_clear_cells_stay_open_to_the_robot():
    dims = GridDims(8, 3)
    belief = belief_of(dims)
    lane = frozenset(Cell(x, 1) for x in range(8))
    req = PlanRequest(Configuration(Cell(0, 1), 0), RegionGoal(CellSet.from_cells(dims, [(7, 1)])), belief, 1,
                      keep_clear=lane)
    plan = LambPlanner().lamb(req)
    assert plan is not None
    assert plan.kinds() == [NAVIGATE]


def test_only_pose_conflicts_close_a_branch(monkeypatch):
    world, belief = doorway_world()

    def conflict(self, req):
        raise PoseConflict('box would overlap a static obstacle')

    monkeypatch.setattr(LambPlanner, '_solve', conflict)
    planner = Lamb()
    assert planner.plan(world.robot, world.goal, belief) is None
    assert planner.stats.failure == 'unsolvable'

    def broken(self, req):
        raise ValueError('unexpected')

    monkeypatch.setattr(LambPlanner, '_solve', broken)
    with pytest.raises(ValueError, match='unexpected'):
        Lamb().plan(world.robot, world.goal, belief)


# bundled scenarios

def first_after(segments, start, accept):
    return next(i for i in range(start, len(segments)) if accept(segments[i]))


def tokens(segment):
    return [a.token() for a in segment.actions]


@pytest.mark.slow
def test_lamb_picks_the_box_out_of_the_channel():
    scenario = bundled('MovableObstacles')
    plan = Lamb().plan(scenario.start, scenario.goal, scenario.omniscient_belief())
    assert plan is not None
    mid = first_after(plan.segments, 0, lambda s: s.kind == MANIP_MID)
    assert 'PICK:box' in tokens(plan.segments[mid])
    assert scenario.with_witness(plan.actions).witness_reaches_goal()


@pytest.mark.slow
def test_lamb_moves_the_small_object_looks_then_pushes():
    scenario = bundled('OccludingObstacles')
    start_view = scenario.initial_belief().viewed
    belief = BeliefGrids(scenario.dims, scenario.model, start_view, scenario.static,
                         {obj.id: obj for obj in scenario.objects})
    plan = Lamb().plan(scenario.start, scenario.goal, belief)
    assert plan is not None
    segments = plan.segments
    pick = first_after(segments, 0, lambda s: s.kind == MANIP_MID and 'PICK:small' in tokens(s))
    look = first_after(segments, pick + 1, lambda s: s.kind == VIEW_SUBGOAL)
    push = first_after(segments, look + 1, lambda s: s.kind == MANIP_MID and 'PUSH' in tokens(s))
    assert pick < look < push
    assert segments[-1].kind in (MANIP_POST, NAVIGATE)
    assert scenario.with_witness(plan.actions).witness_reaches_goal()
