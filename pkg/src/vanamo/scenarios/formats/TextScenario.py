"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import string

import numpy as np

from vanamo.geometry import Cell, CellSet, Footprint, Grid2, GridDims, ring_rotate
from vanamo.sim import Configuration, MovableObject, format_script, parse_script
from vanamo.scenarios.scenario import Category, Scenario
from vanamo.scenarios.scenario_file import ScenarioFile, ScenarioParseError

TEXT_FORMAT_VERSION = 1
MAGIC = 'vanamo'

HEADER_KEYS = ('category', 'seed', 'dims', 'robot', 'robot_width', 'sensing_range')
SECTIONS = ('map', 'objects', 'goal', 'witness', 'end')

FREE = '.'
STATIC = '#'
OBJECT_LETTERS = string.ascii_lowercase + string.ascii_uppercase
TOKENS_PER_LINE = 16


def _number(value):
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def _goal_runs(goal):
    """(y, x0, x1) runs of the goal mask, row by row"""

    runs = []
    for y in range(goal.dims.height):
        xs = np.flatnonzero(goal.mask[y]).tolist()
        start = None
        for i, x in enumerate(xs):
            if start is None:
                start = x
            if i + 1 == len(xs) or xs[i + 1] != x + 1:
                runs.append((y, start, x))
                start = None
    return runs


def format_text(scenario):
    """Canonical `.vanamo` text of a scenario"""

    if len(scenario.objects) > len(OBJECT_LETTERS):
        raise ValueError(f'At most {len(OBJECT_LETTERS)} objects fit in a text map')
    dims = scenario.dims
    q = scenario.start
    lines = [f'{MAGIC} {TEXT_FORMAT_VERSION}',
             f'category {scenario.category if scenario.category is not None else "-"}',
             f'seed {scenario.seed if scenario.seed is not None else "-"}',
             f'dims {dims.width} {dims.height} {_number(dims.resolution)}',
             f'robot {q.cell.x} {q.cell.y} {q.heading}',
             f'robot_width {scenario.robot_width}',
             f'sensing_range {_number(scenario.sensing_range or 0)}',
             '[map]']

    codes = np.zeros(dims.shape, dtype=np.int16)
    codes[scenario.static.mask] = 1
    charmap = {0: FREE, 1: STATIC}
    for k, obj in enumerate(scenario.objects):
        for x, y in obj.cells:
            codes[y, x] = 2 + k
        charmap[2 + k] = OBJECT_LETTERS[k]
    lines.append(Grid2(dims, codes).to_ascii(charmap))

    lines.append('[objects]')
    for k, obj in enumerate(scenario.objects):
        if not obj.id or any(ch.isspace() for ch in obj.id):
            raise ValueError(f'Object id {obj.id!r} cannot be written to a text scenario')
        lines.append(f'{OBJECT_LETTERS[k]} {obj.id} {obj.anchor.x} {obj.anchor.y} {obj.heading}')

    lines.append('[goal]')
    lines.extend(f'{y} {x0} {x1}' for y, x0, x1 in _goal_runs(scenario.goal))

    lines.append('[witness]')
    tokens = format_script(scenario.witness).split()
    for i in range(0, len(tokens), TOKENS_PER_LINE):
        lines.append(' '.join(tokens[i:i + TOKENS_PER_LINE]))

    lines.append('[end]')
    return '\n'.join(lines) + '\n'


def _ints(parts, count, line, field):
    if len(parts) != count:
        raise ScenarioParseError(f'Expected {count} values, got {len(parts)}', line, field)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ScenarioParseError(f'Expected integers, got {" ".join(parts)!r}', line, field) from None


def _float(text, line, field):
    try:
        return float(text)
    except ValueError:
        raise ScenarioParseError(f'Expected a number, got {text!r}', line, field) from None


def _read_header(lines):
    if not lines or not lines[0].strip():
        raise ScenarioParseError('Empty scenario file', 1, MAGIC)
    magic = lines[0].split()
    if len(magic) != 2 or magic[0] != MAGIC:
        raise ScenarioParseError(f'Not a {MAGIC} scenario file', 1, MAGIC)
    if magic[1] != str(TEXT_FORMAT_VERSION):
        raise ScenarioParseError(f'Unsupported format version {magic[1]}', 1, 'version')

    header = {}
    i = 1
    while i < len(lines) and not lines[i].startswith('['):
        parts = lines[i].split()
        if parts:
            key = parts[0]
            if key not in HEADER_KEYS:
                raise ScenarioParseError(f'Unknown header key {key!r}', i + 1, key)
            if key in header:
                raise ScenarioParseError(f'Duplicate header key {key!r}', i + 1, key)
            header[key] = (parts[1:], i + 1)
        i += 1
    for key in HEADER_KEYS:
        if key not in header:
            raise ScenarioParseError(f'Missing header key {key!r}', i + 1, key)
    return header, i


def _read_sections(lines, i):
    """section name -> (first body line index, body lines)"""

    sections = {}
    for name in SECTIONS:
        if i >= len(lines):
            raise ScenarioParseError(f'Missing section [{name}]', i + 1, name)
        if lines[i] != f'[{name}]':
            raise ScenarioParseError(f'Expected section [{name}], got {lines[i]!r}', i + 1, name)
        i += 1
        begin = i
        while i < len(lines) and not lines[i].startswith('['):
            i += 1
        sections[name] = (begin, lines[begin:i])
    _, trailing = sections['end']
    for n, text in enumerate(trailing):
        if text.strip():
            raise ScenarioParseError('Unexpected content after [end]', sections['end'][0] + n + 1, 'end')
    return sections


def parse_text(text):
    """Scenario from `.vanamo` text.

    Raises
    ------
    ScenarioParseError
        with the line number and the header key or section at fault
    """

    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    header, i = _read_header(lines)
    sections = _read_sections(lines, i)

    values, line = header['category']
    if len(values) != 1:
        raise ScenarioParseError('Expected one category name', line, 'category')
    try:
        category = None if values[0] == '-' else Category.parse(values[0])
    except ValueError as err:
        raise ScenarioParseError(str(err), line, 'category') from None

    values, line = header['seed']
    seed = None if values == ['-'] else _ints(values, 1, line, 'seed')[0]

    values, line = header['dims']
    if len(values) != 3:
        raise ScenarioParseError('Expected width, height and resolution', line, 'dims')
    width, height = _ints(values[:2], 2, line, 'dims')
    try:
        dims = GridDims(width, height, _float(values[2], line, 'dims'))
    except ValueError as err:
        raise ScenarioParseError(str(err), line, 'dims') from None

    values, line = header['robot']
    rx, ry, heading = _ints(values, 3, line, 'robot')
    start = Configuration(Cell(rx, ry), heading % 8)

    values, line = header['robot_width']
    robot_width = _ints(values, 1, line, 'robot_width')[0]

    values, line = header['sensing_range']
    if len(values) != 1:
        raise ScenarioParseError('Expected one number', line, 'sensing_range')
    sensing_range = _float(values[0], line, 'sensing_range') or None

    grid, letters = _parse_map(sections['map'], dims)
    objects = _parse_objects(sections['objects'], grid, letters, dims)
    goal = _parse_goal(sections['goal'], dims)

    begin, body = sections['witness']
    witness = []
    for n, text_line in enumerate(body):
        try:
            witness.extend(parse_script(text_line))
        except ValueError as err:
            raise ScenarioParseError(str(err), begin + n + 1, 'witness') from None

    try:
        return Scenario(dims, grid.where(1), tuple(objects), start, goal, robot_width,
                        sensing_range, category, seed, tuple(witness))
    except ValueError as err:
        raise ScenarioParseError(f'Invalid scenario: {err}', None, 'scenario') from None


def _parse_map(section, dims):
    begin, rows = section
    if len(rows) != dims.height:
        raise ScenarioParseError(f'Map has {len(rows)} rows, expected {dims.height}', begin + len(rows), 'map')
    charmap = {FREE: 0, STATIC: 1}
    letters = {}
    for n, row in enumerate(rows):
        if len(row) != dims.width:
            raise ScenarioParseError(f'Map row has {len(row)} characters, expected {dims.width}',
                                     begin + n + 1, 'map')
        for ch in row:
            if ch in charmap:
                continue
            if ch not in OBJECT_LETTERS:
                raise ScenarioParseError(f'Unknown map character {ch!r}', begin + n + 1, 'map')
            letters[ch] = begin + n + 1
            charmap[ch] = 2 + OBJECT_LETTERS.index(ch)
    grid = Grid2.from_ascii('\n'.join(rows), charmap, dims.resolution)
    return grid, letters


def _parse_objects(section, grid, letters, dims):
    begin, body = section
    objects = []
    seen = set()
    for n, text in enumerate(body):
        line = begin + n + 1
        parts = text.split()
        if not parts:
            continue
        if len(parts) != 5 or parts[0] not in OBJECT_LETTERS:
            raise ScenarioParseError('Expected: letter id anchor_x anchor_y heading', line, 'objects')
        letter, object_id = parts[0], parts[1]
        if letter in seen:
            raise ScenarioParseError(f'Object letter {letter!r} declared twice', line, 'objects')
        if letter not in letters:
            raise ScenarioParseError(f'Object letter {letter!r} does not appear in the map', line, 'objects')
        seen.add(letter)
        ax, ay, heading = _ints(parts[2:], 3, line, 'objects')
        cells = grid.where(2 + OBJECT_LETTERS.index(letter)).cells()
        if (ax, ay) not in cells:
            raise ScenarioParseError(f'Anchor ({ax}, {ay}) is not a cell of {object_id}', line, 'objects')
        offsets = [ring_rotate((x - ax, y - ay), -heading) for x, y in cells]
        objects.append(MovableObject(object_id, Footprint(offsets), Cell(ax, ay), heading % 8))
    missing = sorted(set(letters) - seen)
    if missing:
        raise ScenarioParseError(f'Map letter {missing[0]!r} has no object entry', letters[missing[0]], 'map')
    return objects


def _parse_goal(section, dims):
    begin, body = section
    cells = []
    for n, text in enumerate(body):
        parts = text.split()
        if not parts:
            continue
        y, x0, x1 = _ints(parts, 3, begin + n + 1, 'goal')
        if x1 < x0 or not (dims.contains(x0, y) and dims.contains(x1, y)):
            raise ScenarioParseError(f'Goal run {y} {x0} {x1} is outside the grid', begin + n + 1, 'goal')
        cells.extend((x, y) for x in range(x0, x1 + 1))
    if not cells:
        raise ScenarioParseError('Goal region is empty', begin, 'goal')
    return CellSet.from_cells(dims, cells)


class TextScenario(ScenarioFile):
    """Plain-text `.vanamo` scenario.

    Layout: a `vanamo <version>` line, a key/value header (category, seed,
    dims, robot, robot_width, sensing_range), then the sections [map]
    (top row first; '.' free, '#' static, one letter per movable object),
    [objects] (letter, id, anchor and heading per object), [goal] (row runs
    `y x0 x1`), [witness] (action tokens) and [end].
    """

    format_name = 'vanamo'
    extension = '.vanamo'

    def load_scenario(self):
        with open(self.path, 'r', encoding='utf-8', newline='') as f:
            self._scenario = parse_text(f.read())

    @staticmethod
    def detect_format(path):
        try:
            with open(path, 'r', encoding='utf-8') as f:
                first = f.readline()
        except (OSError, UnicodeDecodeError):
            return False
        return first.startswith(MAGIC + ' ')

    @staticmethod
    def write(scenario, path):
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(format_text(scenario))
