import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "ci",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(autouse=True)
def _strict_numpy():
    # surface accidental overflow/invalid operations instead of warnings
    with np.errstate(over="raise", divide="raise", invalid="raise"):
        yield


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, when those tests ran."""
    failed_nums = set()
    seen_nums = set()
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, ()):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.rsplit("::", 1)[-1]
            try:
                num = int(name.split("_")[2])
            except (IndexError, ValueError):
                continue
            seen_nums.add(num)
            if status != "passed":
                failed_nums.add(num)
    if not seen_nums:
        return
    try:
        import test_acceptance as acc

        labels, notes = acc.CRITERIA, acc.NOTES
    except Exception:
        labels, notes = {}, {}
    terminalreporter.section("acceptance criteria")
    for num in sorted(seen_nums):
        status = "FAIL" if num in failed_nums else "PASS"
        line = f"criterion {num:2d}: {status}  {labels.get(num, '')}"
        if num in notes:
            line += f"  [{notes[num]}]"
        terminalreporter.write_line(line)
