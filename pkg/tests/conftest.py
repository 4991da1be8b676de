import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance verdicts, one line per criterion, printed after the run
VERDICTS = {}


@pytest.fixture
def verdict(request):
    """Record ``(criterion, ok, detail)`` for the closing summary."""

    def record(number, title, ok, detail):
        VERDICTS[number] = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance")
        for number in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[number])
