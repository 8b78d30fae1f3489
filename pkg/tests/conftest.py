import os
import sys

import pytest
from hypothesis import HealthCheck, settings

# property suites run derandomized with at least 200 cases each
settings.register_profile(
    "repro",
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


@pytest.fixture(scope="session")
def heisenberg():
    from conezeta.examples import get_example

    return get_example("heisenberg")


@pytest.fixture(scope="session")
def sl2():
    from conezeta.examples import get_example

    return get_example("sl2")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])
