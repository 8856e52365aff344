import numpy as np
import pytest

from npbounds import TiltedFamily

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def bern_pair():
    return TiltedFamily.from_probs([0.4, 0.6], [0.75, 0.25])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def record_criterion():
    """Store a pass/fail line for the acceptance summary."""

    def _record(key: str, passed: bool, detail: str = ""):
        ACCEPTANCE_RESULTS[key] = (bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        passed, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {key}  {detail}")
