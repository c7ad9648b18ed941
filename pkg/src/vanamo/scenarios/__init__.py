from .scenario import Scenario, Category, WitnessError, DEFAULT_DIMS, ROBOT_WIDTHS
from .scenario_file import ScenarioFile, ScenarioParseError
from .formats import TextScenario, H5Scenario, parse_text, format_text
from .store import load, save, detect_format, open_scenario, bundled, find_scenarios, scenario_path, BUNDLE_DIR
from .generators import generate, GenerationExhausted, MIN_DIMS
