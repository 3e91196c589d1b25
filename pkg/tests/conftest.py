import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log(request):
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def check(tag, ok, detail):
        line = f"[{tag}] {'PASS' if ok else 'FAIL'} {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
