"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import io
import logging
from typing import NamedTuple

import numpy as np
import matplotlib
from matplotlib.figure import Figure
from matplotlib.patches import Rectangle

from vanamo.harness.episode import track

logger = logging.getLogger(__name__)

FORMATS = ('svg', 'ascii')

# layer colors (RGB): unviewed, static, movable
UNVIEWED = (0.55, 0.70, 0.95)
STATIC = (0.85, 0.20, 0.20)
MOVABLE = (0.95, 0.85, 0.25)
FREE = (1.0, 1.0, 1.0)
ROBOT = (0.15, 0.15, 0.15)
GOAL = (0.10, 0.60, 0.25)

FRAMES_PER_ROW = 5
SVG_RC = {'svg.hashsalt': 'vanamo', 'svg.fonttype': 'none'}


class Frame(NamedTuple):
    """World and belief after `step` actions of a trace"""

    step: int
    action: object
    world: object
    belief: object

    @property
    def unviewed(self):
        return self.belief.dims.size - len(self.belief.viewed)


def frames(trace, scenario):
    """Replay `trace` and rebuild the belief at every step (steps + 1 frames).

    Raises
    ------
    TraceReplayError
        the trace does not replay in `scenario`
    """

    worlds = trace.replay(scenario)
    belief = scenario.initial_belief()
    out = [Frame(0, None, worlds[0], belief)]
    for n, (action, before, after) in enumerate(zip(trace.actions, worlds, worlds[1:]), start=1):
        belief, _ = track(belief, before, after)
        out.append(Frame(n, action, after, belief))
    return out


def _caption(frame):
    q = frame.world.robot
    action = frame.action.token() if frame.action is not None else 'start'
    return f'step {frame.step}: {action} -> {q} | unviewed {frame.unviewed}'


def frame_ascii(frame):
    """Map of one frame, top row first.

    `?` unviewed, `.` viewed free, `#` known static, the first letter of
    the id for known movables, `R` the robot, `*` goal cells otherwise
    unmarked.
    """

    belief = frame.belief
    dims = belief.dims
    rows = np.full(dims.shape, '?', dtype='<U1')
    rows[belief.viewed.mask] = '.'
    rows[frame.world.goal.cells.mask & ~belief.known_occupied().mask] = '*'
    rows[belief.static.mask] = '#'
    for obj in belief.objects.values():
        for x, y in obj.cells:
            rows[y, x] = obj.id[0]
    for x, y in frame.world.robot_cells():
        rows[y, x] = 'R'
    return '\n'.join(''.join(row) for row in rows[::-1])


def render_ascii(trace, scenario):
    """One text block per frame, separated by blank lines"""

    blocks = [f'{_caption(frame)}\n{frame_ascii(frame)}' for frame in frames(trace, scenario)]
    return '\n\n'.join(blocks) + '\n'


def frame_image(frame):
    """RGB image (rows bottom-up) of the belief layers and the robot"""

    belief = frame.belief
    image = np.empty(belief.dims.shape + (3,))
    image[...] = FREE
    image[~belief.viewed.mask] = UNVIEWED
    image[belief.static.mask] = STATIC
    image[belief.movable_cells().mask] = MOVABLE
    for x, y in frame.world.robot_cells():
        image[y, x] = ROBOT
    return image


def render_svg(trace, scenario):
    """SVG document with every frame in a grid of panels"""

    sequence = frames(trace, scenario)
    dims = scenario.dims
    ncols = min(FRAMES_PER_ROW, len(sequence))
    nrows = -(-len(sequence) // ncols)
    panel = 2.4
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(panel * ncols, panel * nrows * dims.height / dims.width + 0.4 * nrows))
        axes = np.atleast_1d(fig.subplots(nrows, ncols, squeeze=False)).ravel()
        goal = scenario.goal.mask
        for ax, frame in zip(axes, sequence):
            ax.imshow(frame_image(frame), origin='lower', interpolation='nearest',
                      extent=(0, dims.width, 0, dims.height))
            for y, x in zip(*np.nonzero(goal)):
                ax.add_patch(Rectangle((x, y), 1, 1, fill=False, edgecolor=GOAL, linewidth=0.6))
            ax.set_title(f'{frame.step}: {frame.action.token() if frame.action is not None else "start"}',
                         fontsize=7)
            ax.set_xticks([])
            ax.set_yticks([])
        for ax in axes[len(sequence):]:
            ax.set_axis_off()
        fig.suptitle(str(scenario), fontsize=8)
        buffer = io.StringIO()
        fig.savefig(buffer, format='svg', metadata={'Date': None, 'Creator': None})
    logger.debug('Rendered %d frames of %s', len(sequence), scenario)
    return buffer.getvalue()


def render_trace(trace, scenario, format='svg'):
    """Render a trace as an SVG document or as text frames.

    Raises
    ------
    ValueError
        unknown format
    TraceReplayError
        the trace does not replay in `scenario`
    """

    if format == 'svg':
        return render_svg(trace, scenario)
    if format == 'ascii':
        return render_ascii(trace, scenario)
    raise ValueError(f'Unknown render format {format!r}; choose from {", ".join(FORMATS)}')
