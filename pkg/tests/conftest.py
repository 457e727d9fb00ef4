from pathlib import Path

import pytest

from cardtw.examples import config_program, small_program

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture
def small():
    return small_program()


@pytest.fixture
def config():
    return config_program()


@pytest.fixture
def corpus_dir():
    return CORPUS


# one line per acceptance criterion, filled by test_acceptance and echoed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
