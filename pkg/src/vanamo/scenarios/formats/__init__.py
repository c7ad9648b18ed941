from .TextScenario import TextScenario, parse_text, format_text
from .H5Scenario import H5Scenario
