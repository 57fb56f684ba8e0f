import os
import sys

import pytest

# test-only helpers (oracles.py, helpers.py) live next to the tests
sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion."""
    name = request.node.get_closest_marker("criterion").args[0]
    ACCEPTANCE_RESULTS[name] = "FAIL"
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        ACCEPTANCE_RESULTS[name] = "PASS"


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"[{status}] {name}")
