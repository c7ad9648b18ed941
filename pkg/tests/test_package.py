from pathlib import Path

import vanamo

HEADER = '"""\nMIT License\n\nCopyright (c) 2026 VANAMO Tools contributors (see LICENSE)\n"""\n'


def test_modules_carry_the_license_header():
    root = Path(vanamo.__file__).parent
    modules = [p for p in root.rglob('*.py') if p.name != '__init__.py']
    assert modules
    for path in modules:
        assert path.read_text(encoding='utf-8').startswith(HEADER), path.relative_to(root)
