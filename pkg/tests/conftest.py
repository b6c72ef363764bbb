import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from startree.construction import build_tower  # noqa: E402


@pytest.fixture(scope="session")
def tower():
    return build_tower(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "_results", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
