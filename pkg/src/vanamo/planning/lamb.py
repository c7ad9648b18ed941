"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from vanamo.geometry import Cell, CellSet, distance_field, swept_cells, incremental_sweep
from vanamo.sim.actions import (Action, ActionModel, Occupancy, RejectedAction,
                                PICK, PLACE, PUSH)
from vanamo.sim.belief import PoseConflict, apply_effects
from vanamo.sim.bodies import Configuration, heading_vector
from vanamo.planning.search import (SearchMode, ConfigGoal, ViewGoal, Failure,
                                    BUDGET_EXCEEDED, field_heuristic, path_vision,
                                    va_star)

logger = logging.getLogger(__name__)

NAVIGATE = 'navigate'
VIEW_SUBGOAL = 'view-subgoal'
MANIP_PRE = 'manip-pre'
MANIP_MID = 'manip-mid'
MANIP_POST = 'manip-post'

# reasons reported in PlannerStats.failure
UNSOLVABLE = 'unsolvable'
DEPTH_EXHAUSTED = 'depth-exhausted'
BUDGET_EXHAUSTED = 'budget-exhausted'

CARDINAL_HEADINGS = (0, 2, 4, 6)


@dataclass(frozen=True)
class PlannerConfig:
    """Tunables shared by all planners.

    Parameters
    ----------
    depth : int
        recursion depth of a top-level request
    node_budget : int
        expansions per search call
    total_budget : int
        expansions per top-level planning call, summed over all searches
    push_distance : int
        longest push (cells) tried for one candidate
    placement_radius : int
        furthest placement (Chebyshev cells) tried for a pick
    placements_per_side : int
        placements kept per grasp side
    max_candidates : int
        manipulation candidates tried per colliding object
    max_viewpoints : int
        viewpoint legs per visibility subgoal
    manipulation : bool
        False disables the collision-relaxed branch
    """

    depth: int = 6
    node_budget: int = 200_000
    total_budget: int = 2_000_000
    push_distance: int = 4
    placement_radius: int = 6
    placements_per_side: int = 3
    max_candidates: int = 12
    max_viewpoints: int = 16
    manipulation: bool = True

    def __post_init__(self):
        for name in ('node_budget', 'total_budget', 'push_distance', 'max_candidates', 'max_viewpoints'):
            if getattr(self, name) < 1:
                raise ValueError(f'PlannerConfig.{name} must be positive, got {getattr(self, name)}')
        if self.depth < 0:
            raise ValueError(f'PlannerConfig.depth must be >= 0, got {self.depth}')


@dataclass(frozen=True)
class ManipCandidate:
    """One way of moving one object out of the way.

    `actions` applied at `pre` end at `post` with the object at `result`.
    `object_swept` covers every cell the object passes through and
    `robot_swept` every cell the robot body covers during the macro.
    `blockers` are other objects standing on the robot body at `pre`; the
    approach has to move them first.
    """

    object_id: str
    kind: str
    pre: Configuration
    post: Configuration
    actions: tuple
    result: object
    object_swept: CellSet
    robot_swept: CellSet
    cost: int
    blockers: tuple = ()

    def __str__(self):
        return f'{self.kind} {self.object_id} from {self.pre} ({len(self.actions)} actions, cost {self.cost})'


@dataclass(frozen=True)
class PlanRequest:
    """One call of the recursion.

    `forbidden` cells are closed to every body. `keep_clear` cells stay open
    to the robot, but no object may be left on them: they hold the sweep of
    a manipulation that runs after this request.
    """

    start: Configuration
    goal: object
    belief: object
    depth: int
    forbidden: frozenset = frozenset()
    excluded: frozenset = frozenset()
    manipulation: Optional[ManipCandidate] = None
    keep_clear: frozenset = frozenset()

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError(f'Depth must be >= 0, got {self.depth}')
        unknown = set(self.excluded) - set(self.belief.objects)
        if unknown:
            raise ValueError(f'Excluded objects {sorted(unknown)} are not known')

    def key(self):
        cand = None
        if self.manipulation is not None:
            cand = (self.manipulation.object_id, self.manipulation.pre, self.manipulation.actions)
        return (self.start, self.goal.signature(), self.belief.digest(), self.forbidden,
                self.excluded, cand, self.depth, self.keep_clear)


@dataclass
class Segment:
    kind: str
    actions: list
    configs: list


@dataclass
class LambPlan:
    """Concatenated plan with the effects it predicts on the belief.

    Attributes
    ----------
    segments : list of Segment
        contiguous; each segment starts where the previous one ends
    viewed : CellSet
        cells the plan expects to see along the way
    moves : dict
        object id -> final MovableObject for every object the plan moves
    """

    segments: list
    viewed: CellSet
    moves: dict = field(default_factory=dict)

    @property
    def actions(self):
        return [a for seg in self.segments for a in seg.actions]

    @property
    def configs(self):
        out = list(self.segments[0].configs)
        for seg in self.segments[1:]:
            out.extend(seg.configs[1:])
        return out

    @property
    def start(self):
        return self.segments[0].configs[0]

    @property
    def final(self):
        return self.segments[-1].configs[-1]

    @property
    def cost(self):
        return sum(a.cost for a in self.actions)

    def kinds(self):
        return [seg.kind for seg in self.segments]

    def relabel(self, old, new):
        segments = [Segment(new if s.kind == old else s.kind, s.actions, s.configs) for s in self.segments]
        return LambPlan(segments, self.viewed, dict(self.moves))

    def apply(self, belief):
        return apply_effects(belief, self.viewed, self.moves.values())

    @classmethod
    def join(cls, plans):
        plans = [p for p in plans if p is not None]
        segments = [s for p in plans for s in p.segments]
        viewed = plans[0].viewed
        moves = {}
        for p in plans:
            viewed = viewed | p.viewed
            for oid, obj in p.moves.items():
                moves.pop(oid, None)
                moves[oid] = obj
        return cls(segments, viewed, moves)

    def __str__(self):
        parts = ', '.join(f'{s.kind}[{len(s.actions)}]' for s in self.segments)
        return f'LambPlan(cost {self.cost}: {parts})'


@dataclass
class PlannerStats:
    searches: int = 0
    expanded: int = 0
    depth_hit: bool = False
    budget_hit: bool = False
    deepest: int = 0
    failure: Optional[str] = None


class MacroResult:

    def __init__(self, configs, unviewed, viewed, result):
        self.configs = configs
        self.unviewed = unviewed
        self.viewed = viewed
        self.result = result


def collisions(plan, belief, exclude=()):
    """Ids of the known movable objects the plan's body sweep enters, in order of first contact.

    Parameters
    ----------
    plan : Plan or LambPlan
        anything with `configs`
    belief : BeliefGrids
    exclude : iterable of str
        object ids to ignore (the carried object is always ignored)
    """

    owner = {}
    for obj in belief.objects.values():
        if obj.id in exclude:
            continue
        for c in obj.cells:
            owner[c] = obj.id
    configs = plan.configs
    held = configs[0].attachment.object_id if configs[0].attachment is not None else None
    model = ActionModel(belief.robot)
    occ = Occupancy(belief.dims, frozenset(), belief.objects, movables_block=False)

    def carried(q):
        moved = model.carried(q, occ)
        return moved.cells if moved is not None else []

    order = []
    for fresh in incremental_sweep(belief.robot.footprint, configs, belief.dims, carried):
        for cell in fresh:
            oid = owner.get(Cell(*cell))
            if oid is not None and oid != held and oid not in order:
                order.append(oid)
    return order


def first_collision(plan, belief, exclude=()):
    """Id of the first known movable object the plan's body sweep enters, or None"""

    hit = collisions(plan, belief, exclude)
    return hit[0] if hit else None


def _carried_sweep(configs, belief):
    """Cells covered by the carried object along an attached path"""

    model = ActionModel(belief.robot)
    occ = Occupancy(belief.dims, frozenset(), belief.objects, movables_block=False)
    cells = [c for q in configs for c in model.carried(q, occ).cells]
    return CellSet.from_cells(belief.dims, cells)


def _plan_sweep(configs, belief):
    model = ActionModel(belief.robot)
    occ = Occupancy(belief.dims, frozenset(), belief.objects, movables_block=False)

    def carried(q):
        moved = model.carried(q, occ)
        return moved.cells if moved is not None else []

    return swept_cells(belief.robot.footprint, configs, belief.dims, carried)


class LambPlanner:
    """Recursive planner: direct, then look-then-go, then clear-the-way.

    Parameters
    ----------
    config : PlannerConfig, optional
    """

    def __init__(self, config=None):
        self.config = config if config is not None else PlannerConfig()
        self.stats = PlannerStats()
        self._budget_left = self.config.total_budget
        self._failed = set()

    def plan(self, start, goal, belief, forbidden=frozenset(), excluded=frozenset()):
        """Top-level call; resets the budget and the failure memo"""

        self.stats = PlannerStats()
        self._budget_left = self.config.total_budget
        self._failed = set()
        req = PlanRequest(start, goal, belief, self.config.depth, frozenset(forbidden), frozenset(excluded))
        result = self.lamb(req)
        if result is None:
            if self.stats.budget_hit:
                self.stats.failure = BUDGET_EXHAUSTED
            elif self.stats.depth_hit:
                self.stats.failure = DEPTH_EXHAUSTED
            else:
                self.stats.failure = UNSOLVABLE
            logger.debug('Planning failed (%s) after %d searches, %d expansions',
                         self.stats.failure, self.stats.searches, self.stats.expanded)
        else:
            logger.debug('Planned %s after %d searches', result, self.stats.searches)
        return result

    # searching

    def search(self, start, goal, belief, mode, h=None):
        if self._budget_left <= 0:
            self.stats.budget_hit = True
            return Failure(BUDGET_EXCEEDED, 0)
        budget = min(self.config.node_budget, self._budget_left)
        result = va_star(start, goal, belief, mode, h, budget)
        self.stats.searches += 1
        spent = result.expanded
        self.stats.expanded += spent
        self._budget_left -= spent
        if isinstance(result, Failure) and result.reason == BUDGET_EXCEEDED:
            self.stats.budget_hit = True
        return result

    def navigation_plan(self, plan, belief, kind=NAVIGATE):
        viewed = path_vision(plan.configs, belief)
        moves = {}
        final = plan.configs[-1]
        if final.attachment is not None:
            anchor, heading = final.carried_pose()
            held = belief.objects[final.attachment.object_id]
            moves[held.id] = held.moved_to(anchor, heading)
        return LambPlan([Segment(kind, list(plan.actions), list(plan.configs))], viewed, moves)

    # recursion

    def lamb(self, req):
        """Plan for one request, or None"""

        key = req.key()
        self.stats.deepest = max(self.stats.deepest, self.config.depth - req.depth)
        if key in self._failed:
            return None
        try:
            result = self._solve(req)
        except PoseConflict as err:
            # predicted effects overlap the belief
            logger.debug('Discarding branch: %s', err)
            result = None
        if result is None:
            self._failed.add(key)
        return result

    def _solve(self, req):
        if req.manipulation is not None:
            return self._manipulate(req)

        direct = self.search(req.start, req.goal, req.belief, SearchMode.direct(req.forbidden))
        if not isinstance(direct, Failure):
            return self.navigation_plan(direct, req.belief)
        if req.depth == 0:
            self.stats.depth_hit = True
            return None

        relaxed = self.search(req.start, req.goal, req.belief, SearchMode.visibility_relaxed(req.forbidden))
        if not isinstance(relaxed, Failure):
            logger.debug('Depth %d: direct plan blocked by visibility, looking first', req.depth)
            plan = self._look_then_go(req, relaxed)
            if plan is not None:
                return plan

        if self.config.manipulation:
            return self._clear_the_way(req)
        return None

    def _view_region(self, req, q, region, belief, keep_clear=frozenset()):
        """Viewpoint legs until every cell of `region` has been viewed.

        Viewpoints are searched in an obstacle-relaxed belief: objects this
        branch may still move are dropped from it, so they neither block nor
        occlude, and the leg to the viewpoint is a full recursive request
        that moves them when they stand on it. A viewpoint whose leg fails,
        or sees nothing of the region, is skipped. Objects moved on the way
        are not left on `keep_clear`.

        Returns (plans, belief, configuration) or None.
        """

        plans = []
        remaining = region - belief.viewed
        keep_clear = req.keep_clear | frozenset(keep_clear)
        skipped = set()
        for _ in range(self.config.max_viewpoints):
            if not remaining:
                break
            solid = set(req.excluded)
            if q.attachment is not None:
                solid.add(q.attachment.object_id)
            scout = belief.with_objects({oid: obj for oid, obj in belief.objects.items() if oid in solid})
            F = distance_field(CellSet.full(belief.dims), remaining)
            goal = ViewGoal(remaining, view=scout.view_from, rejected=frozenset(skipped))
            viewpoint = self.search(q, goal, scout, SearchMode(False, True, req.forbidden), field_heuristic(F))
            if isinstance(viewpoint, Failure):
                return None
            target = viewpoint.final
            leg = self.lamb(PlanRequest(q, ConfigGoal(target), belief, req.depth - 1, req.forbidden,
                                        req.excluded, keep_clear=keep_clear))
            after = leg.apply(belief) if leg is not None else None
            if after is None or remaining.isdisjoint(after.viewed):
                logger.debug('Skipping viewpoint %s', target)
                skipped.add(target)
                continue
            remaining = remaining - after.viewed
            plans.append(leg.relabel(NAVIGATE, VIEW_SUBGOAL))
            belief = after
            q = leg.final
        if remaining:
            return None
        return plans, belief, q

    def _look_then_go(self, req, relaxed):
        belief = req.belief
        route = _plan_sweep(relaxed.configs, belief)
        region = route - belief.viewed - belief.known_occupied()
        if not region:
            return None
        # objects moved while looking stay off the route
        out = self._view_region(req, req.start, region, belief, frozenset(route))
        if out is None:
            return None
        legs, belief, q = out
        if not legs:
            return None
        final = self.lamb(replace(req, start=q, belief=belief, depth=req.depth - 1))
        if final is None:
            return None
        return LambPlan.join(legs + [final])

    def _clear_the_way(self, req):
        belief = req.belief
        # objects this branch may not move are obstacles even with collisions relaxed
        solid = req.forbidden | frozenset(c for oid in req.excluded for c in belief.objects[oid].cells)
        relaxed = self.search(req.start, req.goal, belief, SearchMode.collision_relaxed(solid))
        if isinstance(relaxed, Failure):
            return None
        obj = first_collision(relaxed, belief, exclude=req.excluded)
        if obj is None:
            return None
        candidates = self.sample_manip(obj, req, relaxed)
        logger.debug('Depth %d: %d candidates for moving %s', req.depth, len(candidates), obj)
        excluded = req.excluded | {obj}

        for cand in candidates:
            if self.simulate_macro(cand, _without(belief, cand.blockers), req.forbidden) is None:
                continue
            sweep = frozenset(cand.object_swept) | frozenset(cand.robot_swept)
            pre = self.lamb(PlanRequest(req.start, ConfigGoal(cand.pre), belief, req.depth - 1, req.forbidden,
                                        excluded, keep_clear=req.keep_clear | sweep))
            if pre is None:
                continue
            staged = pre.apply(belief)
            mid = self.lamb(PlanRequest(cand.pre, ConfigGoal(cand.post), staged, req.depth - 1, req.forbidden,
                                        excluded, cand, req.keep_clear))
            if mid is None:
                continue
            after = mid.apply(staged)
            post = self.lamb(PlanRequest(cand.post, req.goal, after, req.depth - 1, req.forbidden, excluded,
                                         keep_clear=req.keep_clear))
            if post is None:
                continue
            logger.debug('Depth %d: cleared %s with %s', req.depth, obj, cand)
            return LambPlan.join([pre.relabel(NAVIGATE, MANIP_PRE),
                                  mid.relabel(NAVIGATE, MANIP_MID),
                                  post.relabel(NAVIGATE, MANIP_POST)])
        return None

    # manipulation

    def simulate_macro(self, cand, belief, forbidden):
        """Replay a macro against the belief; None on a collision"""

        model = ActionModel(belief.robot)
        dims = belief.dims
        allowed = belief.viewed | belief.movable_cells()
        objects = dict(belief.objects)
        q = cand.pre
        configs = [q]
        seen = belief.view_from(q)
        unviewed = set()
        for action in cand.actions:
            occ = Occupancy(dims, belief.static_set, objects, True, forbidden)
            out = model.apply(q, action, occ)
            if isinstance(out, RejectedAction):
                logger.debug('Macro %s rejected at %s: %s', cand, q, out)
                return None
            for c in list(out.robot_cells) + list(out.object_cells):
                if c not in allowed and c not in seen:
                    unviewed.add(c)
            if out.moved is not None and out.moved.id in objects and action.kind in (PUSH, PLACE):
                objects[out.moved.id] = out.moved
            q = out.config
            configs.append(q)
            seen = seen | belief.with_objects(objects).view_from(q)
        return MacroResult(configs, CellSet.from_cells(dims, unviewed), seen, objects[cand.object_id])

    def _manipulate(self, req):
        cand = req.manipulation
        sim = self.simulate_macro(cand, req.belief, req.forbidden)
        if sim is None:
            return None
        if sim.unviewed:
            if req.depth == 0:
                self.stats.depth_hit = True
                return None
            logger.debug('Macro %s needs %d unviewed cells seen first', cand, len(sim.unviewed))
            sweep = frozenset(cand.object_swept) | frozenset(cand.robot_swept)
            out = self._view_region(req, req.start, sim.unviewed, req.belief, sweep)
            if out is None:
                return None
            legs, belief, q = out
            back = self.lamb(PlanRequest(q, ConfigGoal(cand.pre), belief, req.depth - 1, req.forbidden,
                                         req.excluded, keep_clear=req.keep_clear | sweep))
            if back is None:
                return None
            belief = back.apply(belief)
            sim = self.simulate_macro(cand, belief, req.forbidden)
            if sim is None or sim.unviewed:
                return None
            macro = LambPlan([Segment(MANIP_MID, list(cand.actions), sim.configs)], sim.viewed,
                             {cand.object_id: sim.result})
            return LambPlan.join(legs + [back.relabel(NAVIGATE, VIEW_SUBGOAL), macro])
        return LambPlan([Segment(MANIP_MID, list(cand.actions), sim.configs)], sim.viewed,
                        {cand.object_id: sim.result})

    def sample_manip(self, object_id, req, relaxed=None):
        """Ordered manipulation candidates for one known object.

        Pushes from each cardinal side (1..K cells) and, for pickable
        objects, pick-carry-place to viewed free placements near the object.
        Contact poses are checked against static cells only: other objects
        on the robot body there become the candidate's blockers, and the
        macro is sampled without them. Candidates that leave the object
        clear of `relaxed` (the collision-relaxed plan) come first, then
        those that sweep only cells already seen free, then those without
        blockers, each by cost. No candidate leaves the object on
        `req.keep_clear`.
        """

        belief = req.belief
        if req.start.attachment is not None:
            return []
        obj = belief.objects[object_id]
        blocked_path = _plan_sweep(relaxed.configs, belief) if relaxed is not None else CellSet.empty(belief.dims)
        model = ActionModel(belief.robot)
        ground = belief.occupancy(False, req.forbidden)

        candidates = []
        for heading in CARDINAL_HEADINGS:
            pre = self._contact(obj, heading, model, ground)
            if pre is None:
                continue
            body = set(belief.robot.cells(pre))
            blockers = tuple(sorted(oid for oid, other in belief.objects.items()
                                    if oid != obj.id and not body.isdisjoint(other.cells)))
            clear = _without(belief, blockers)
            found = self._pushes(obj, pre, model, clear, req.forbidden)
            if obj.pickable:
                found.extend(self._picks(obj, pre, model, clear, belief, req, blocked_path))
            for cand in found:
                if req.keep_clear.isdisjoint(cand.result.cells):
                    candidates.append(replace(cand, blockers=blockers))

        known_free = belief.viewed | CellSet.from_cells(belief.dims, obj.cells)

        def order(cand):
            result = CellSet.from_cells(belief.dims, cand.result.cells)
            swept = result | cand.object_swept | cand.robot_swept
            return (not result.isdisjoint(blocked_path), not swept.issubset(known_free), bool(cand.blockers),
                    cand.cost)

        candidates.sort(key=order)
        return candidates[:self.config.max_candidates]

    def _contact(self, obj, heading, model, occ):
        """Robot configuration facing `obj` from one side, centered on its face when possible"""

        dx, dy = heading_vector(heading)
        cells = set(obj.cells)
        face = sorted(c for c in cells if Cell(c.x - dx, c.y - dy) not in cells)
        if not face:
            return None
        # the face runs perpendicular to the heading; start from its middle
        order = sorted(range(len(face)), key=lambda i: (abs(2 * i - (len(face) - 1)), i))
        for i in order:
            c = face[i]
            q = Configuration(Cell(c.x - dx, c.y - dy), heading)
            if not cells.isdisjoint(model.robot.cells(q)):
                continue
            if not isinstance(model.settle(q, occ), RejectedAction):
                return q
        return None

    def _pushes(self, obj, pre, model, belief, forbidden):
        out = []
        objects = dict(belief.objects)
        q = pre
        robot_cells = list(belief.robot.cells(pre))
        object_cells = list(obj.cells)
        actions = []
        for _ in range(self.config.push_distance):
            occ = Occupancy(belief.dims, belief.static_set, objects, True, forbidden)
            step = model.apply(q, Action(PUSH), occ)
            if isinstance(step, RejectedAction):
                break
            actions.append(Action(PUSH))
            objects[obj.id] = step.moved
            q = step.config
            robot_cells.extend(step.robot_cells)
            object_cells.extend(step.object_cells)
            result = step.moved
            out.append(ManipCandidate(obj.id, PUSH, pre, q, tuple(actions), result,
                                      CellSet.from_cells(belief.dims, object_cells),
                                      CellSet.from_cells(belief.dims, robot_cells),
                                      sum(a.cost for a in actions)))
        return out

    def _placements(self, obj, belief, req, blocked_path):
        """Translations of `obj` onto viewed free cells, nearest to the cells it has to free first.

        The cells to free are those the collision-relaxed sweep
        `blocked_path` needs, or all of the object when it needs none.
        Placements on `blocked_path`, `req.forbidden` or `req.keep_clear`
        are never proposed.
        """

        radius = self.config.placement_radius
        occupied = belief.static | belief.movable_cells(exclude=(obj.id,))
        current = CellSet.from_cells(belief.dims, obj.cells)
        freed = list(current & blocked_path) or list(current)

        def distance(moved):
            return min(max(abs(c.x - f.x), abs(c.y - f.y)) for c in moved.cells for f in freed)

        found = []
        for dx in range(-radius, radius + 1):
            for dy in range(-radius, radius + 1):
                if (dx, dy) == (0, 0):
                    continue
                moved = obj.moved_to((obj.anchor.x + dx, obj.anchor.y + dy))
                cells = moved.cells
                if not all(belief.dims.contains(*c) for c in cells):
                    continue
                if any(c in req.forbidden or c in req.keep_clear for c in cells):
                    continue
                placed = CellSet.from_cells(belief.dims, cells)
                if not placed.isdisjoint(occupied) or not placed.issubset(belief.viewed):
                    continue
                if not placed.isdisjoint(blocked_path):
                    continue
                found.append(((distance(moved), max(abs(dx), abs(dy)), dy, dx), (dx, dy), moved))
        found.sort(key=lambda item: item[0])
        for _, offset, moved in found:
            yield offset, moved

    def _picks(self, obj, pre, model, clear, belief, req, blocked_path):
        """Pick-carry-place candidates from `pre`, carried through `clear` (the belief without blockers)"""

        grasp = model.apply(pre, Action(PICK, obj.id), clear.occupancy(True, req.forbidden))
        if isinstance(grasp, RejectedAction):
            return []
        held = grasp.config
        out = []
        for (dx, dy), moved in self._placements(obj, belief, req, blocked_path):
            if len(out) >= self.config.placements_per_side:
                break
            target = Configuration(Cell(held.cell.x + dx, held.cell.y + dy), held.heading, held.attachment)
            if isinstance(model.settle(target, clear.occupancy(True, req.forbidden)), RejectedAction):
                continue
            carry = self.search(held, ConfigGoal(target), clear, SearchMode.visibility_relaxed(req.forbidden))
            if isinstance(carry, Failure):
                continue
            actions = (Action(PICK, obj.id),) + tuple(carry.actions) + (Action(PLACE),)
            configs = [pre] + list(carry.configs) + [target.detached()]
            object_swept = _carried_sweep(carry.configs, clear)
            robot_swept = swept_cells(belief.robot.footprint, configs, belief.dims)
            out.append(ManipCandidate(obj.id, PICK, pre, target.detached(), actions, moved,
                                      object_swept, robot_swept, sum(a.cost for a in actions)))
        return out


def _without(belief, object_ids):
    """Belief with some objects dropped"""

    if not object_ids:
        return belief
    return belief.with_objects({oid: obj for oid, obj in belief.objects.items() if oid not in object_ids})


def lamb(req, config=None):
    """Plan one request with a fresh LambPlanner"""

    planner = LambPlanner(config)
    return planner.lamb(req)


def sample_manip(object_id, req, relaxed=None, config=None):
    return LambPlanner(config).sample_manip(object_id, req, relaxed)
