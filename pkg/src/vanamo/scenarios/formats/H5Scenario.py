"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import numpy as np
import h5py as h5

from vanamo.geometry import Cell, Footprint, Grid2
from vanamo.sim import Configuration, MovableObject, format_script, parse_script
from vanamo.scenarios.scenario import Category, Scenario
from vanamo.scenarios.scenario_file import ScenarioFile, ScenarioParseError

H5_FORMAT_VERSION = 1
FORMAT_TAG = 'vanamo-scenario'


class H5Scenario(ScenarioFile):
    """Binary scenario (HDF5).

    Root attributes hold the header (format tag, version, category, seed,
    robot start, robot width, sensing range, witness script). The static
    map and the goal mask are uint8 datasets written with
    `Grid2.save_h5`; every object is a group under `objects/` with its id,
    anchor, heading and footprint offsets.
    """

    format_name = 'h5'
    extension = '.h5'

    def load_scenario(self):
        with h5.File(self.path, 'r') as f:
            version = int(f.attrs.get('version', -1))
            if version != H5_FORMAT_VERSION:
                raise ScenarioParseError(f'Unsupported scenario file version {version}', None, 'version')
            for key in ('category', 'seed', 'robot', 'robot_width', 'sensing_range', 'witness'):
                if key not in f.attrs:
                    raise ScenarioParseError(f'Missing attribute {key!r}', None, key)
            for key in ('static', 'goal', 'objects'):
                if key not in f:
                    raise ScenarioParseError(f'Missing dataset or group {key!r}', None, key)

            static = Grid2.load_h5(f, 'static')
            dims = static.dims
            goal = Grid2.load_h5(f, 'goal')

            objects = []
            group = f['objects']
            for name in sorted(group.keys()):
                entry = group[name]
                anchor = entry.attrs['anchor']
                offsets = [tuple(int(v) for v in row) for row in entry['offsets'][()]]
                objects.append(MovableObject(str(entry.attrs['id']), Footprint(offsets),
                                             Cell(int(anchor[0]), int(anchor[1])),
                                             int(entry.attrs['heading'])))

            category = str(f.attrs['category'])
            seed = int(f.attrs['seed'])
            robot = f.attrs['robot']
            sensing_range = float(f.attrs['sensing_range'])
            try:
                witness = parse_script(str(f.attrs['witness']))
            except ValueError as err:
                raise ScenarioParseError(str(err), None, 'witness') from None

            try:
                self._scenario = Scenario(
                    dims,
                    static.where(1),
                    tuple(objects),
                    Configuration(Cell(int(robot[0]), int(robot[1])), int(robot[2]) % 8),
                    goal.where(1),
                    int(f.attrs['robot_width']),
                    sensing_range or None,
                    Category.parse(category) if category else None,
                    seed if seed >= 0 else None,
                    tuple(witness))
            except ValueError as err:
                raise ScenarioParseError(f'Invalid scenario: {err}', None, 'scenario') from None

    @staticmethod
    def detect_format(path):
        try:
            if not h5.is_hdf5(path):
                return False
            with h5.File(path, 'r') as f:
                return f.attrs.get('format') == FORMAT_TAG
        except OSError:
            return False

    @staticmethod
    def write(scenario, path):
        if scenario.seed is not None and scenario.seed < 0:
            raise ValueError(f'Seed must be non-negative to be stored, got {scenario.seed}')
        q = scenario.start
        with h5.File(path, 'w') as f:
            f.attrs['format'] = FORMAT_TAG
            f.attrs['version'] = H5_FORMAT_VERSION
            f.attrs['category'] = str(scenario.category) if scenario.category is not None else ''
            f.attrs['seed'] = scenario.seed if scenario.seed is not None else -1
            f.attrs['robot'] = np.array([q.cell.x, q.cell.y, q.heading], dtype=np.int32)
            f.attrs['robot_width'] = scenario.robot_width
            f.attrs['sensing_range'] = float(scenario.sensing_range or 0)
            f.attrs['witness'] = format_script(scenario.witness)

            Grid2(scenario.dims, scenario.static.mask.astype(np.uint8)).save_h5(f, 'static')
            Grid2(scenario.dims, scenario.goal.mask.astype(np.uint8)).save_h5(f, 'goal')

            group = f.create_group('objects')
            for k, obj in enumerate(scenario.objects):
                entry = group.create_group(f'{k:04d}')
                entry.attrs['id'] = obj.id
                entry.attrs['anchor'] = np.array([obj.anchor.x, obj.anchor.y], dtype=np.int32)
                entry.attrs['heading'] = obj.heading
                entry.create_dataset('offsets', data=np.array(obj.footprint.offsets, dtype=np.int32))

    def __str__(self):
        return f'{self.path} (HDF5, version {H5_FORMAT_VERSION})'
