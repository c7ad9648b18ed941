"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from vanamo.geometry import Cell, Footprint, ring_rotate, HEADING_VECTORS

# pick-size bound: bounding box (width, height) at heading 0
PICK_BOUND = (2, 2)


def heading_vector(heading):
    return HEADING_VECTORS[heading % 8]


def within_cone(heading, dx, dy):
    """True when offset (dx, dy) lies within 45 degrees of `heading`"""

    ux, uy = HEADING_VECTORS[heading % 8]
    dot = dx * ux + dy * uy
    return dot >= 0 and 2 * dot * dot >= (dx * dx + dy * dy) * (ux * ux + uy * uy)


class Attachment(NamedTuple):
    """Rigid grasp of a movable object.

    `offset` is the object anchor relative to the robot cell, expressed for
    robot heading 0; the anchor at robot heading h is the ring rotation of
    the offset by h. `rel_heading` is object heading minus robot heading.
    """

    object_id: str
    offset: tuple
    rel_heading: int

    def offset_at(self, heading):
        return ring_rotate(self.offset, heading)


class Configuration(NamedTuple):
    cell: Cell
    heading: int
    attachment: Optional[Attachment] = None

    def carried_pose(self):
        """(anchor, heading) of the attached object, or None"""

        if self.attachment is None:
            return None
        dx, dy = self.attachment.offset_at(self.heading)
        return (Cell(self.cell.x + dx, self.cell.y + dy),
                (self.heading + self.attachment.rel_heading) % 8)

    def detached(self):
        return Configuration(self.cell, self.heading)

    def __str__(self):
        held = f' holding {self.attachment.object_id}' if self.attachment else ''
        return f'({self.cell.x}, {self.cell.y}) h{self.heading}{held}'


@dataclass(frozen=True)
class MovableObject:
    """A movable obstacle and its current pose"""

    id: str
    footprint: Footprint
    anchor: Cell
    heading: int = 0

    @property
    def cells(self):
        return self.footprint.cells(self.anchor, self.heading)

    @property
    def pickable(self):
        w, h = self.footprint.bounding_box
        return w <= PICK_BOUND[0] and h <= PICK_BOUND[1]

    @property
    def pushable(self):
        return True

    @property
    def pose(self):
        return (self.anchor, self.heading)

    def moved_to(self, anchor, heading=None):
        return MovableObject(self.id, self.footprint, Cell(*anchor),
                             self.heading if heading is None else heading % 8)

    def __str__(self):
        kind = 'pickable' if self.pickable else 'push-only'
        return f'{self.id} at ({self.anchor.x}, {self.anchor.y}) h{self.heading}, {len(self.footprint)} cells, {kind}'


@dataclass(frozen=True)
class RobotModel:
    """Body and camera of the robot.

    Parameters
    ----------
    footprint : Footprint
        body cells around the robot cell (default: bar three cells wide,
        perpendicular to the heading)
    sensing_range : float, optional
        maximum viewing distance in cells; None means the grid diagonal
    """

    footprint: Footprint = field(default_factory=lambda: Footprint.bar(3))
    sensing_range: Optional[float] = None

    def cells(self, q):
        return self.footprint.cells(q.cell, q.heading)

    @property
    def width(self):
        return len(self.footprint)
