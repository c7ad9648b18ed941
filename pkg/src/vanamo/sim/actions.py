"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
from typing import NamedTuple, Optional

from vanamo.geometry import Cell, ring_rotate
from vanamo.sim.bodies import (Attachment, Configuration, heading_vector,
                               within_cone)

logger = logging.getLogger(__name__)

FORWARD = 'forward'
BACK = 'back'
STRAFE_LEFT = 'strafe_left'
STRAFE_RIGHT = 'strafe_right'
ROTATE_LEFT = 'rotate_left'
ROTATE_RIGHT = 'rotate_right'
PICK = 'pick'
PLACE = 'place'
PUSH = 'push'

_TOKENS = {
    FORWARD: 'F',
    BACK: 'B',
    STRAFE_LEFT: 'SL',
    STRAFE_RIGHT: 'SR',
    ROTATE_LEFT: 'RL',
    ROTATE_RIGHT: 'RR',
    PLACE: 'PLACE',
    PUSH: 'PUSH',
}
_KINDS = {token: kind for kind, token in _TOKENS.items()}

COSTS = {
    FORWARD: 1,
    BACK: 1,
    STRAFE_LEFT: 1,
    STRAFE_RIGHT: 1,
    ROTATE_LEFT: 1,
    ROTATE_RIGHT: 1,
    PICK: 1,
    PLACE: 1,
    PUSH: 2,
}

# rejection reasons
COLLISION = 'collision'
NO_CONTACT = 'no-contact'
NOT_PICKABLE = 'not-pickable'
NOTHING_ATTACHED = 'nothing-attached'
ALREADY_ATTACHED = 'already-attached'
OUT_OF_BOUNDS = 'out-of-bounds'


class Action(NamedTuple):
    kind: str
    object_id: Optional[str] = None

    @property
    def cost(self):
        return COSTS[self.kind]

    @property
    def is_motion(self):
        return self.kind in MOTION_KINDS

    def token(self):
        if self.kind == PICK:
            return f'PICK:{self.object_id}'
        return _TOKENS[self.kind]

    @classmethod
    def parse(cls, token):
        """Inverse of `token()`; raises ValueError on unknown tokens"""

        token = token.strip()
        if token.startswith('PICK:'):
            object_id = token[5:]
            if not object_id:
                raise ValueError('PICK token is missing an object id')
            return cls(PICK, object_id)
        if token not in _KINDS:
            raise ValueError(f'Unknown action token {token!r}')
        return cls(_KINDS[token])

    def __str__(self):
        return self.token()


MOTION_KINDS = (FORWARD, BACK, STRAFE_LEFT, STRAFE_RIGHT, ROTATE_LEFT, ROTATE_RIGHT)
MOTIONS = tuple(Action(kind) for kind in MOTION_KINDS)


def pick(object_id):
    return Action(PICK, object_id)


def format_script(actions):
    return ' '.join(a.token() for a in actions)


def parse_script(text):
    return [Action.parse(tok) for tok in text.split()]


class RejectedAction(NamedTuple):
    reason: str
    detail: str = ''

    def __str__(self):
        return f'{self.reason}: {self.detail}' if self.detail else self.reason


class Transition(NamedTuple):
    """Accepted action: successor configuration and the body cells after it.

    `moved` is the new state of the object whose pose changed (carried,
    placed, or pushed), else None.
    """

    config: Configuration
    robot_cells: list
    object_cells: list
    moved: object = None


class Occupancy:
    """What a transition is checked against.

    Parameters
    ----------
    dims : GridDims
    static : set of Cell
        cells that never move
    objects : dict
        object id -> MovableObject; the attached object is always listed
    movables_block : bool
        when False movable objects are ignored as obstacles (relaxed search)
    forbidden : set of Cell, optional
        extra cells no body may enter
    """

    def __init__(self, dims, static, objects, movables_block=True, forbidden=()):
        self.dims = dims
        self.static = static
        self.objects = objects
        self.forbidden = forbidden
        self.owner = {}
        if movables_block:
            for obj in objects.values():
                for c in obj.cells:
                    self.owner[c] = obj.id

    def blocked(self, cell, ignore):
        """Reason the cell is unusable, or None"""

        if not self.dims.contains(cell[0], cell[1]):
            return OUT_OF_BOUNDS
        if cell in self.static or cell in self.forbidden:
            return COLLISION
        owner = self.owner.get(cell)
        if owner is not None and owner != ignore:
            return COLLISION
        return None


class ActionModel:
    """Deterministic transition function shared by the world and the planners"""

    def __init__(self, robot):
        self.robot = robot

    def apply(self, q, action, occ):
        """Outcome of `action` from configuration `q`.

        Returns
        -------
        Transition or RejectedAction
        """

        kind = action.kind
        if kind in (FORWARD, BACK, STRAFE_LEFT, STRAFE_RIGHT):
            offset = {FORWARD: 0, BACK: 4, STRAFE_LEFT: 2, STRAFE_RIGHT: -2}[kind]
            dx, dy = heading_vector(q.heading + offset)
            return self.settle(q._replace(cell=Cell(q.cell.x + dx, q.cell.y + dy)), occ)
        if kind == ROTATE_LEFT:
            return self.settle(q._replace(heading=(q.heading + 1) % 8), occ)
        if kind == ROTATE_RIGHT:
            return self.settle(q._replace(heading=(q.heading - 1) % 8), occ)
        if kind == PICK:
            return self._pick(q, action.object_id, occ)
        if kind == PLACE:
            return self._place(q, occ)
        if kind == PUSH:
            return self._push(q, occ)
        raise ValueError(f'Unknown action kind {kind!r}')

    def carried(self, q, occ):
        """State of the attached object at configuration q, or None"""

        if q.attachment is None:
            return None
        anchor, heading = q.carried_pose()
        return occ.objects[q.attachment.object_id].moved_to(anchor, heading)

    def settle(self, q, occ):
        """Check configuration q (and what it carries) against occupancy"""

        robot_cells = self.robot.cells(q)
        moved = self.carried(q, occ)
        object_cells = moved.cells if moved is not None else []
        ignore = moved.id if moved is not None else None
        for cell in robot_cells:
            reason = occ.blocked(cell, ignore)
            if reason is not None:
                return RejectedAction(reason, f'robot cell ({cell.x}, {cell.y})')
        for cell in object_cells:
            reason = occ.blocked(cell, ignore)
            if reason is not None:
                return RejectedAction(reason, f'{moved.id} cell ({cell.x}, {cell.y})')
        if object_cells and not set(robot_cells).isdisjoint(object_cells):
            return RejectedAction(COLLISION, f'{moved.id} overlaps the robot')
        return Transition(q, robot_cells, object_cells, moved)

    def in_contact(self, q, obj):
        """Some object cell is adjacent to the robot cell within the heading cone"""

        for c in obj.cells:
            dx, dy = c.x - q.cell.x, c.y - q.cell.y
            if max(abs(dx), abs(dy)) == 1 and within_cone(q.heading, dx, dy):
                return True
        return False

    def _pick(self, q, object_id, occ):
        if q.attachment is not None:
            return RejectedAction(ALREADY_ATTACHED, f'holding {q.attachment.object_id}')
        obj = occ.objects.get(object_id)
        if obj is None:
            return RejectedAction(NO_CONTACT, f'unknown object {object_id}')
        if not obj.pickable:
            return RejectedAction(NOT_PICKABLE, str(obj))
        if not self.in_contact(q, obj):
            return RejectedAction(NO_CONTACT, f'{object_id} is not within reach')
        offset = ring_rotate((obj.anchor.x - q.cell.x, obj.anchor.y - q.cell.y), -q.heading)
        grasp = Attachment(object_id, offset, (obj.heading - q.heading) % 8)
        held = q._replace(attachment=grasp)
        moved = self.carried(held, occ)
        if moved.pose != obj.pose:
            raise RuntimeError(f'Attachment of {object_id} does not reproduce its pose')
        return Transition(held, self.robot.cells(held), moved.cells, moved)

    def _place(self, q, occ):
        if q.attachment is None:
            return RejectedAction(NOTHING_ATTACHED)
        moved = self.carried(q, occ)
        released = q.detached()
        return Transition(released, self.robot.cells(released), moved.cells, moved)

    def _push(self, q, occ):
        if q.attachment is not None:
            return RejectedAction(ALREADY_ATTACHED, 'cannot push while holding an object')
        dx, dy = heading_vector(q.heading)
        faced = Cell(q.cell.x + dx, q.cell.y + dy)
        owner = occ.owner.get(faced)
        if owner is None:
            return RejectedAction(NO_CONTACT, f'no movable object at ({faced.x}, {faced.y})')
        obj = occ.objects[owner]
        moved = obj.moved_to((obj.anchor.x + dx, obj.anchor.y + dy))
        ahead = q._replace(cell=faced)
        robot_cells = self.robot.cells(ahead)
        object_cells = moved.cells
        for cell in object_cells:
            reason = occ.blocked(cell, owner)
            if reason is not None:
                return RejectedAction(reason, f'{owner} cell ({cell.x}, {cell.y})')
        for cell in robot_cells:
            reason = occ.blocked(cell, owner)
            if reason is not None:
                return RejectedAction(reason, f'robot cell ({cell.x}, {cell.y})')
        if not set(robot_cells).isdisjoint(object_cells):
            return RejectedAction(COLLISION, f'robot would overlap {owner}')
        return Transition(ahead, robot_cells, object_cells, moved)
