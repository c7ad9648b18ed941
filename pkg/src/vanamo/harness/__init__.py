from .episode import (Trace, TraceStep, TraceReplayError, EpisodeResult, run_episode, save_trace, load_trace,
                      still_valid, unsafe_cells, TIMEOUT, PLANNER_NONE, SAFETY_VIOLATION, REJECTED_ACTION, ERROR)
from .benchmark import (BenchConfig, BenchConfigError, run_benchmark, success_table, format_table,
                        read_results, write_results, RESULT_COLUMNS)
from .render import Frame, frames, render_trace, render_ascii, render_svg
