import re
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from asjq.io import load_query

DATA = Path(__file__).resolve().parent.parent / "data"
FLIGHTS = DATA / "flights.asjq"

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

# filled by test_acceptance.py, printed after the run
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def flights():
    return load_query(FLIGHTS)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    order = lambda k: (int(re.match(r"\d+", k).group()), k)
    for key in sorted(ACCEPTANCE, key=order):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {text}")
