import numpy as np
import pytest

from vanamo.geometry import Cell, CellSet, Footprint, GridDims
from vanamo.planning import PlannerConfig
from vanamo.sim import Configuration, InvalidWorld, MovableObject, parse_script, pick
from vanamo.scenarios import (BUNDLE_DIR, Category, DEFAULT_DIMS, GenerationExhausted, MIN_DIMS, Scenario,
                              ScenarioParseError, WitnessError, bundled, detect_format, find_scenarios, format_text,
                              generate, load, parse_text, save, scenario_path)
from vanamo.scenarios.generators import LAYOUTS


# bundle

def test_bundle_has_one_scenario_per_category():
    found = find_scenarios()
    assert {category for category, _ in found} == set(Category)
    for (category, seed), path in found.items():
        assert path == scenario_path(BUNDLE_DIR, category, seed)


@pytest.mark.parametrize('path', sorted(find_scenarios().values()), ids=lambda p: p.parent.name)
def test_bundled_files_are_canonical(path):
    text = path.read_text(encoding='utf-8')
    scenario = parse_text(text)
    assert format_text(scenario) == text
    assert (str(scenario.category), scenario.seed) == (path.parent.name, int(path.stem))


@pytest.mark.parametrize('category', list(Category))
def test_bundled_witness_reaches_goal(category):
    scenario = bundled(category)
    assert scenario.witness
    assert scenario.witness_reaches_goal()
    assert not scenario.to_world().at_goal()


def test_goal_starts_unviewed_in_the_hallway():
    scenario = bundled('Visibility')
    belief = scenario.initial_belief()
    assert scenario.goal.isdisjoint(belief.viewed)
    assert scenario.omniscient_belief().viewed == CellSet.full(scenario.dims)


def test_replay_reports_the_rejected_action():
    scenario = bundled('Visibility')
    with pytest.raises(WitnessError, match='Action 0'):
        scenario.replay([pick('ghost')])
    assert not scenario.with_witness([pick('ghost')]).witness_reaches_goal()
    assert len(scenario.replay(scenario.witness)) == len(scenario.witness) + 1


# text format

def visibility_text():
    return (BUNDLE_DIR / 'Visibility' / '0.vanamo').read_text(encoding='utf-8')


def test_truncated_file_names_the_missing_section():
    text = visibility_text()
    with pytest.raises(ScenarioParseError) as err:
        parse_text(text[:text.index('[witness]')])
    assert err.value.field == 'witness'
    assert 'Missing section [witness]' in str(err.value)


def test_parse_errors_point_at_the_field():
    text = visibility_text()
    with pytest.raises(ScenarioParseError) as err:
        parse_text(text.replace('robot_width 3', 'robot_width x'))
    assert (err.value.line, err.value.field) == (6, 'robot_width')

    with pytest.raises(ScenarioParseError) as err:
        parse_text(text.replace('.' * 24, '.' * 9 + '%' + '.' * 14))
    assert err.value.field == 'map'

    with pytest.raises(ScenarioParseError) as err:
        parse_text(text.replace('vanamo 1', 'vanamo 2'))
    assert err.value.field == 'version'

    with pytest.raises(ScenarioParseError) as err:
        parse_text(text.replace('category Visibility', 'category Teleport'))
    assert err.value.field == 'category'


def test_map_letter_needs_an_object_entry():
    text = visibility_text().replace('.' * 24, '.' * 12 + 'a' + '.' * 11)
    with pytest.raises(ScenarioParseError) as err:
        parse_text(text)
    assert err.value.field == 'map'


def test_objects_survive_the_text_format():
    dims = GridDims(8, 6)
    table = MovableObject('table', Footprint.rectangle(3, 2), Cell(4, 2), 2)
    scenario = Scenario(dims, CellSet.from_cells(dims, [(0, 0), (7, 5)]),
                        (MovableObject('box', Footprint.single(), Cell(2, 4)), table),
                        Configuration(Cell(1, 2), 0), CellSet.from_cells(dims, [(6, 1), (6, 2)]), robot_width=1)
    assert parse_text(format_text(scenario)) == scenario


# storage

def test_h5_and_text_storage(tmp_path):
    scenario = bundled('ObstructedAffordance')
    for name, expected in [('s.h5', 'h5'), ('s.vanamo', 'vanamo')]:
        path = save(scenario, tmp_path / name)
        assert detect_format(path) == expected
        assert load(path) == scenario


def test_unknown_files(tmp_path):
    path = tmp_path / 'notes.txt'
    path.write_text('not a scenario\n')
    with pytest.raises(OSError):
        load(path)
    with pytest.raises(ValueError):
        save(bundled('Visibility'), tmp_path / 'x.vanamo', format='yaml')


def test_find_scenarios_skips_other_files(tmp_path):
    path = scenario_path(tmp_path, 'visibility', 3)
    path.parent.mkdir()
    save(bundled('Visibility'), path)
    (tmp_path / 'Visibility' / 'draft.vanamo').write_text('')
    assert find_scenarios(tmp_path) == {(Category.VISIBILITY, 3): tmp_path / 'Visibility' / '3.vanamo'}


# scenario validation

def test_category_names():
    assert Category.parse('obstructed-visibility') is Category.OBSTRUCTED_VISIBILITY
    assert Category.parse('OBSTRUCTED_VISIBILITY') is Category.OBSTRUCTED_VISIBILITY
    assert Category.parse(Category.VISIBILITY) is Category.VISIBILITY
    with pytest.raises(ValueError):
        Category.parse('Teleport')


def test_invalid_scenarios():
    dims = GridDims(6, 6)
    goal = CellSet.from_cells(dims, [(5, 5)])
    start = Configuration(Cell(2, 2), 0)
    with pytest.raises(ValueError):
        Scenario(dims, CellSet.empty(dims), (), start, goal, robot_width=2)
    with pytest.raises(ValueError):
        Scenario(dims, CellSet.empty(dims), (), start, CellSet.empty(dims))
    with pytest.raises(InvalidWorld):
        Scenario(dims, CellSet.empty(dims), (MovableObject('box', Footprint.single(), Cell(2, 3)),), start, goal)
    box = MovableObject('box', Footprint.single(), Cell(4, 4))
    with pytest.raises(ValueError):
        Scenario(dims, CellSet.empty(dims), (box, box), start, goal, robot_width=1)


# generators

def test_generate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate('Visibility', 0, GridDims(10, 10))
    with pytest.raises(ValueError):
        generate('Visibility', -1)
    with pytest.raises(ValueError):
        generate('Teleport', 0)


def test_generation_exhausted_names_the_check():
    err = GenerationExhausted(Category.VISIBILITY, 4, 'relaxed path missing', 32)
    assert 'relaxed path missing' in str(err)
    assert err.attempts == 32


@pytest.mark.slow
@pytest.mark.parametrize('category', list(Category))
def test_generated_scenarios_are_certified_and_reproducible(category):
    scenario = generate(category, 1)
    assert scenario.category is category
    assert scenario.seed == 1
    assert scenario.witness_reaches_goal()
    assert generate(category, 1) == scenario
    assert parse_text(format_text(scenario)) == scenario


def test_every_layout_draw_carries_a_working_witness():
    '''The scripted witness fits whichever offsets the seed picks'''

    for category, layout in LAYOUTS.items():
        for seed in range(8):
            scenario, script = layout(np.random.default_rng([seed, 0]), DEFAULT_DIMS, seed)
            assert scenario.with_witness(parse_script(script)).witness_reaches_goal(), (category, seed)


@pytest.mark.parametrize('category, steps', [
    (Category.OBSTRUCTED_VISIBILITY, ['PICK:box', 'PLACE']),
    (Category.MOVABLE_OBSTACLES, ['PICK:box', 'PLACE']),
    (Category.OCCLUDING_OBSTACLES, ['PICK:small', 'PLACE', 'PUSH']),
    (Category.OBSTRUCTED_AFFORDANCE, ['PICK:chair', 'PLACE', 'PUSH']),
])
def test_layout_witness_moves_the_blocking_object_first(category, steps):
    scenario, script = LAYOUTS[category](np.random.default_rng([0, 0]), DEFAULT_DIMS, 0)
    tokens = script.split()
    firsts = [tokens.index(step) for step in steps]
    assert firsts == sorted(firsts)
    assert scenario.objects


def test_layouts_reject_grids_they_do_not_fit():
    with pytest.raises(ValueError):
        LAYOUTS[Category.OCCLUDING_OBSTACLES](np.random.default_rng(0), GridDims(16, 24), 0)
    with pytest.raises(ValueError):
        LAYOUTS[Category.VISIBILITY](np.random.default_rng(0), GridDims(24, 12), 0)


def test_generation_gives_up_with_the_last_check():
    starved = PlannerConfig(node_budget=1)
    with pytest.raises(GenerationExhausted) as err:
        generate(Category.VISIBILITY, 0, config=starved, max_attempts=2)
    assert err.value.check == 'visibility-relaxed path missing'
    assert err.value.attempts == 2


@pytest.mark.slow
def test_generated_scenarios_fit_their_minimum_size():
    category = Category.SIMPLE_NAVIGATION
    scenario = generate(category, 2, MIN_DIMS[category])
    assert (scenario.dims.width, scenario.dims.height) == MIN_DIMS[category]
    assert scenario.witness_reaches_goal()
