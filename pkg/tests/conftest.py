import random

import pytest

from lambdaq import parse, parse_program


@pytest.fixture
def rng():
    return random.Random(20240611)


def run(text, level="q"):
    """Parse ``text`` against the prelude and return the resolved main term."""
    return parse_program(text, level).resolved_main()


@pytest.fixture
def p():
    return parse


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    if module is None or not any(module.RESULTS.values()):
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
