import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from napsim import LinkConfig, PowerVector  # noqa: E402


@pytest.fixture
def power():
    return PowerVector()


@pytest.fixture
def link():
    return LinkConfig()


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import VERDICTS
    if VERDICTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
