"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import logging
import tomllib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import pandas as pd

from vanamo.geometry import GridDims
from vanamo.planning import PlannerConfig, PlannerKind
from vanamo.scenarios import Category, GenerationExhausted, generate, load, scenario_path
from vanamo.harness.episode import (run_episode, DEFAULT_STEP_BUDGET, DEFAULT_TIME_BUDGET, ERROR)

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['planner', 'category', 'seed', 'success', 'steps', 'plan_time_ms', 'failure_reason']


class BenchConfigError(ValueError):
    """Benchmark configuration that cannot be run"""


@dataclass(frozen=True)
class BenchConfig:
    """What a benchmark sweep runs.

    Parameters
    ----------
    categories : tuple of Category
    seeds : tuple of int
    planners : tuple of PlannerKind
    width, height : int
        size of generated scenarios
    step_budget : int
        actions per episode
    time_budget : float
        planner seconds per episode
    replan_every_step : bool
    timing : bool
        record planner wall times (the CSV is then no longer reproducible)
    workers : int
        episodes run in parallel processes when > 1
    scenario_dir : Path, optional
        load `<dir>/<category>/<seed>.vanamo` instead of generating
    planner : PlannerConfig
    """

    categories: tuple = tuple(Category)
    seeds: tuple = (0, 1, 2, 3, 4)
    planners: tuple = tuple(PlannerKind)
    width: int = 24
    height: int = 24
    step_budget: int = DEFAULT_STEP_BUDGET
    time_budget: float = DEFAULT_TIME_BUDGET
    replan_every_step: bool = False
    timing: bool = False
    workers: int = 1
    scenario_dir: Optional[Path] = None
    planner: PlannerConfig = field(default_factory=PlannerConfig)

    def __post_init__(self):
        try:
            object.__setattr__(self, 'categories', tuple(Category.parse(c) for c in self.categories))
            object.__setattr__(self, 'planners', tuple(PlannerKind(str(p)) for p in self.planners))
        except ValueError as err:
            raise BenchConfigError(str(err)) from None
        object.__setattr__(self, 'seeds', tuple(int(s) for s in self.seeds))
        if self.scenario_dir is not None:
            object.__setattr__(self, 'scenario_dir', Path(self.scenario_dir))
        if not (self.categories and self.seeds and self.planners):
            raise BenchConfigError('categories, seeds and planners must not be empty')
        if any(s < 0 for s in self.seeds):
            raise BenchConfigError(f'Seeds must be non-negative, got {self.seeds}')
        if self.step_budget < 1 or self.workers < 1:
            raise BenchConfigError('step_budget and workers must be positive')

    @property
    def dims(self):
        return GridDims(self.width, self.height)

    @classmethod
    def from_dict(cls, values):
        """Config from parsed TOML; unknown keys are an error"""

        values = dict(values)
        planner = values.pop('planner', {})
        known = {f.name for f in fields(cls)} - {'planner'}
        unknown = sorted(set(values) - known)
        if unknown:
            raise BenchConfigError(f'Unknown benchmark keys: {", ".join(unknown)}')
        planner_keys = {f.name for f in fields(PlannerConfig)}
        unknown = sorted(set(planner) - planner_keys)
        if unknown:
            raise BenchConfigError(f'Unknown [planner] keys: {", ".join(unknown)}')
        try:
            return cls(planner=PlannerConfig(**planner), **values)
        except TypeError as err:
            raise BenchConfigError(str(err)) from None

    @classmethod
    def load(cls, path):
        with open(path, 'rb') as f:
            try:
                values = tomllib.load(f)
            except tomllib.TOMLDecodeError as err:
                raise BenchConfigError(f'{path}: {err}') from None
        return cls.from_dict(values)

    def override(self, **flags):
        """Copy with the flags that are not None applied"""

        return replace(self, **{k: v for k, v in flags.items() if v is not None})

    def __str__(self):
        return (f'{len(self.planners)} planners x {len(self.categories)} categories x '
                f'{len(self.seeds)} seeds ({self.width}x{self.height})')


def _scenario(config, category, seed):
    if config.scenario_dir is not None:
        return load(scenario_path(config.scenario_dir, category, seed))
    return generate(category, seed, config.dims, config.planner)


def _episode(job):
    """One benchmark row; runs in a worker process when workers > 1"""

    kind, category, seed, scenario, config = job
    row = {'planner': str(kind), 'category': str(category), 'seed': seed}
    try:
        outcome, _ = run_episode(scenario, kind, config.step_budget, config.time_budget,
                                 config.replan_every_step, config.planner, config.timing)
    except Exception as err:
        logger.warning('Episode %s %s #%d raised %s: %s', kind, category, seed, type(err).__name__, err)
        row.update(success=False, steps=0, plan_time_ms=None, failure_reason=ERROR)
        return row
    row.update(success=outcome.success, steps=outcome.steps, plan_time_ms=outcome.plan_time_ms,
               failure_reason=outcome.failure_reason or '')
    return row


def run_benchmark(config, out=None):
    """Run every (planner, category, seed) episode of the sweep.

    Scenarios are built once per (category, seed) and shared by all
    planners. A scenario that cannot be built, or an episode that raises,
    is recorded with failure reason 'error'.

    Parameters
    ----------
    config : BenchConfig
    out : path, optional
        write the results as CSV

    Returns
    -------
    pandas.DataFrame
        one row per episode, ordered by planner, category and seed as
        listed in the config
    """

    logger.info('Benchmark: %s', config)
    scenarios = {}
    for category in config.categories:
        for seed in config.seeds:
            try:
                scenarios[(category, seed)] = _scenario(config, category, seed)
            except (GenerationExhausted, OSError, ValueError) as err:
                logger.warning('No scenario for %s #%d: %s', category, seed, err)
                scenarios[(category, seed)] = None

    jobs = []
    rows = []
    for kind in config.planners:
        for category in config.categories:
            for seed in config.seeds:
                scenario = scenarios[(category, seed)]
                if scenario is None:
                    rows.append({'planner': str(kind), 'category': str(category), 'seed': seed,
                                 'success': False, 'steps': 0, 'plan_time_ms': None, 'failure_reason': ERROR})
                    continue
                jobs.append((kind, category, seed, scenario, config))

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows.extend(pool.map(_episode, jobs))
    else:
        rows.extend(_episode(job) for job in jobs)

    df = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    order = {str(k): n for n, k in enumerate(config.planners)}
    cats = {str(c): n for n, c in enumerate(config.categories)}
    df = df.sort_values(['planner', 'category', 'seed'],
                        key=lambda col: col.map(order) if col.name == 'planner'
                        else col.map(cats) if col.name == 'category' else col,
                        kind='stable').reset_index(drop=True)
    if out is not None:
        write_results(df, out)
    return df


def write_results(df, path):
    df.to_csv(path, index=False, columns=RESULT_COLUMNS)
    logger.info('Wrote %d results to %s', len(df), path)


def read_results(path):
    df = pd.read_csv(path, keep_default_na=False, dtype={'planner': str, 'category': str, 'failure_reason': str})
    missing = [c for c in RESULT_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f'{path} lacks result columns {missing}')
    if df['success'].dtype != bool:
        df['success'] = df['success'].astype(str) == 'True'
    return df


def success_table(df):
    """'k/n' successes per planner (rows) and category (columns), in first-seen order"""

    planners = list(dict.fromkeys(df['planner']))
    categories = list(dict.fromkeys(df['category']))
    counts = df.groupby(['planner', 'category'])['success'].agg(['sum', 'count'])
    table = pd.DataFrame(index=pd.Index(planners, name='planner'), columns=categories, dtype=object)
    for (planner, category), (k, n) in counts.iterrows():
        table.loc[planner, category] = f'{int(k)}/{int(n)}'
    return table.fillna('-')


def format_table(table):
    """Aligned text form of a success table"""

    return table.to_string()
