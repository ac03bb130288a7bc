import numpy as np
import pytest

from uniformity_lab import arith

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def tables_small():
    """Shared tables up to 10^4 for unit tests."""
    return arith.build_tables(10_000)


@pytest.fixture(scope="session")
def tables_large():
    """Shared tables up to 10^6 for the heavier checks."""
    return arith.build_tables(1_000_000)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture
def acceptance():
    """Collects one human-readable pass line per acceptance criterion."""

    def record(line: str) -> None:
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
