import time
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from eurtight.cases import BOUND_CASES, bound_case
from eurtight.certify import OptimizerConfig, minimize_entropy_sum

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); printed after the run
ACCEPTANCE_LINES: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def certified_run(name: str):
    """Default-config minimization of a registered bound case, with its wall time."""
    case = bound_case(name)
    obs = case.observables()
    t0 = time.perf_counter()
    result = minimize_entropy_sum(obs, OptimizerConfig())
    return result, time.perf_counter() - t0


@pytest.fixture(scope="session")
def runs():
    return certified_run


@pytest.fixture(scope="session")
def bound_cases():
    return BOUND_CASES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
