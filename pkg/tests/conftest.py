import sys

import pytest

from lawcheck.kernel import Config, quick_config


@pytest.fixture(scope="session")
def qcfg():
    """Reduced budgets; unit tests should not re-run the full catalog."""
    return quick_config(Config())


@pytest.fixture(scope="session")
def cfg():
    return Config()


def pytest_terminal_summary(terminalreporter):
    # acceptance verdicts; printed here because capture swallows them mid-run
    mod = (sys.modules.get("test_acceptance")
           or sys.modules.get("tests.test_acceptance"))
    lines = getattr(mod, "VERDICT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
