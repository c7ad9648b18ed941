"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
from pathlib import Path

from vanamo.scenarios.formats import TextScenario, H5Scenario
from vanamo.scenarios.scenario import Category

logger = logging.getLogger(__name__)

FORMATS = {'vanamo': TextScenario,
           'h5': H5Scenario}

BUNDLE_DIR = Path(__file__).resolve().parent / 'bundle'


def detect_format(path):
    """Format key of the scenario file at `path`"""

    for format_key, format_class in FORMATS.items():
        if format_class.detect_format(path):
            return format_key
    raise IOError(f'No scenario format detected for {path}')


def open_scenario(path):
    """ScenarioFile for `path`; the scenario is parsed on first access"""

    return FORMATS[detect_format(path)](path)


def load(path):
    """Load a scenario from a `.vanamo` or `.h5` file.

    Raises
    ------
    IOError
        the file is in no known format
    ScenarioParseError
        the file is malformed
    """

    scenario_file = open_scenario(path)
    scenario = scenario_file.scenario
    logger.debug('Loaded %s from %s', scenario, scenario_file)
    return scenario


def save(scenario, path, format=None):
    """Write `scenario`; the format defaults to the one matching the suffix"""

    if format is None:
        suffix = Path(path).suffix.lower()
        format = 'h5' if suffix in ('.h5', '.hdf5') else 'vanamo'
    if format not in FORMATS:
        raise ValueError(f'Unknown scenario format {format!r}; choose from {", ".join(FORMATS)}')
    FORMATS[format].write(scenario, path)
    return Path(path)


def scenario_path(root, category, seed):
    """`<root>/<category>/<seed>.vanamo`"""

    return Path(root) / str(Category.parse(category)) / f'{seed}.vanamo'


def find_scenarios(root=None):
    """(category, seed) -> path for every scenario in a bundle directory"""

    root = Path(root) if root is not None else BUNDLE_DIR
    found = {}
    for category in Category:
        for path in sorted((root / str(category)).glob('*.vanamo')):
            try:
                seed = int(path.stem)
            except ValueError:
                logger.warning('Skipping %s: file name is not a seed', path)
                continue
            found[(category, seed)] = path
    return found


def bundled(category, seed=0):
    """Scenario shipped with the package"""

    return load(scenario_path(BUNDLE_DIR, category, seed))
