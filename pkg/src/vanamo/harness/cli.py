"""
MIT License

Copyright (c) 2026 VANAMO Tools contributors (see LICENSE)
"""

import argparse
import logging
import sys
from pathlib import Path

from vanamo import __version__
from vanamo.geometry import GridDims
from vanamo.planning import PlannerKind
from vanamo.scenarios import Category, GenerationExhausted, ScenarioParseError, generate, load, save
from vanamo.harness.benchmark import (BenchConfig, BenchConfigError, format_table, read_results, run_benchmark,
                                      success_table)
from vanamo.harness.episode import (TraceReplayError, load_trace, run_episode, save_trace,
                                    DEFAULT_STEP_BUDGET, DEFAULT_TIME_BUDGET)
from vanamo.harness.render import FORMATS, render_trace

logger = logging.getLogger(__name__)

# exit codes
OK = 0
EPISODE_FAILED = 1
BAD_INPUT = 2


def _scenario(name, seed, width, height):
    """A scenario file, or a category name to generate from `seed`"""

    path = Path(name)
    if path.exists():
        return load(path)
    try:
        category = Category.parse(name)
    except ValueError:
        raise FileNotFoundError(f'{name} is neither a scenario file nor a category') from None
    return generate(category, seed, GridDims(width, height))


def _render_format(path, requested):
    if requested is not None:
        return requested
    return 'svg' if Path(path).suffix.lower() == '.svg' else 'ascii'


def run(args):
    scenario = _scenario(args.scenario, args.seed, args.width, args.height)
    result, trace = run_episode(scenario, args.planner, args.step_budget, args.time_budget,
                                args.replan_every_step, timing=args.timing)
    print(f'{scenario}\n{args.planner}: {result}')
    if args.trace:
        save_trace(trace, args.trace)
    if args.render:
        Path(args.render).write_text(render_trace(trace, scenario, _render_format(args.render, args.format)))
    return OK if result.success else EPISODE_FAILED


def bench(args):
    config = BenchConfig.load(args.config) if args.config else BenchConfig()
    config = config.override(workers=args.workers, timing=True if args.timing else None,
                             scenario_dir=args.scenario_dir,
                             replan_every_step=True if args.replan_every_step else None)
    df = run_benchmark(config, args.out)
    print(format_table(success_table(df)))
    return OK


def gen(args):
    scenario = generate(args.category, args.seed, GridDims(args.width, args.height))
    save(scenario, args.out)
    print(f'{scenario} -> {args.out}')
    return OK


def render(args):
    scenario = load(args.scenario)
    trace = load_trace(args.trace, scenario)
    document = render_trace(trace, scenario, _render_format(args.out, args.format))
    Path(args.out).write_text(document)
    return OK


def table(args):
    print(format_table(success_table(read_results(args.results))))
    return OK


def build_parser():
    parser = argparse.ArgumentParser(prog='vanamo',
                                     description='Visibility-aware navigation among movable obstacles')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='logging threshold (default WARNING)')
    sub = parser.add_subparsers(dest='cmd', required=True)

    planners = [k.value for k in PlannerKind]

    p = sub.add_parser('run', help='run one episode')
    p.add_argument('--scenario', required=True, help='scenario file, or a category to generate')
    p.add_argument('--planner', required=True, choices=planners)
    p.add_argument('--seed', type=int, default=0, help='seed when --scenario names a category')
    p.add_argument('--width', type=int, default=24)
    p.add_argument('--height', type=int, default=24)
    p.add_argument('--step-budget', type=int, default=DEFAULT_STEP_BUDGET)
    p.add_argument('--time-budget', type=float, default=DEFAULT_TIME_BUDGET, help='planner seconds')
    p.add_argument('--replan-every-step', action='store_true')
    p.add_argument('--timing', action='store_true', help='report planner wall time')
    p.add_argument('--trace', help='write the trace as CSV')
    p.add_argument('--render', help='render the trace (.svg, anything else as text)')
    p.add_argument('--format', choices=FORMATS)
    p.set_defaults(func=run)

    p = sub.add_parser('bench', help='run a benchmark sweep')
    p.add_argument('--config', help='TOML file (default: every planner, category and seeds 0-4)')
    p.add_argument('--out', help='results CSV')
    p.add_argument('--workers', type=int)
    p.add_argument('--scenario-dir', help='load <dir>/<category>/<seed>.vanamo instead of generating')
    p.add_argument('--replan-every-step', action='store_true')
    p.add_argument('--timing', action='store_true', help='record plan_time_ms')
    p.set_defaults(func=bench)

    p = sub.add_parser('gen', help='generate a scenario')
    p.add_argument('--category', required=True, help=', '.join(c.value for c in Category))
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--out', required=True, help='.vanamo or .h5 file')
    p.add_argument('--width', type=int, default=24)
    p.add_argument('--height', type=int, default=24)
    p.set_defaults(func=gen)

    p = sub.add_parser('render', help='render a saved trace')
    p.add_argument('--scenario', required=True)
    p.add_argument('--trace', required=True, help='trace CSV written by run --trace')
    p.add_argument('--out', required=True)
    p.add_argument('--format', choices=FORMATS)
    p.set_defaults(func=render)

    p = sub.add_parser('table', help='success table of a results CSV')
    p.add_argument('--results', required=True)
    p.set_defaults(func=table)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except (OSError, ScenarioParseError, BenchConfigError, GenerationExhausted, TraceReplayError,
            ValueError) as err:
        print(f'vanamo {args.cmd}: {err}', file=sys.stderr)
        return BAD_INPUT


if __name__ == '__main__':
    sys.exit(main())
