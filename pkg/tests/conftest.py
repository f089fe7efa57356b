from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from hurwitz_lab.groups import parse_group_spec

# Property tests run derandomized so the suite is reproducible run to run.
settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def s3():
    return parse_group_spec("gdih:3")


@pytest.fixture(scope="session")
def d5():
    return parse_group_spec("gdih:5")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.rsplit(".", 1)[-1] == "test_acceptance"), None)
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, label = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {label}")
