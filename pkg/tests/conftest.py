"""Shared fixtures and the acceptance-report summary hook."""
import numpy as np
import pytest

from sphrect import critical_constants, solve_family1, solve_family2

# (number, description, passed) tuples recorded by the `criterion` fixture;
# replayed after the run so each criterion gets one visible pass/fail line
_ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


@pytest.fixture(scope="session")
def consts():
    return critical_constants()


@pytest.fixture(scope="session")
def sol_k2():
    """First-family solution at k = 2 (the alpha = 1/2 shape)."""
    return solve_family1(2.0)


@pytest.fixture(scope="session")
def sol2_k3():
    """Second-family solution at k = 3."""
    return solve_family2(3.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260815)


@pytest.fixture()
def criterion():
    """Record one acceptance-criterion outcome and assert it."""

    def record(number: int, description: str, passed: bool) -> None:
        _ACCEPTANCE_RESULTS.append((number, description, passed))
        print(f"acceptance {number:2d} [{'PASS' if passed else 'FAIL'}] {description}")
        assert passed, f"acceptance criterion {number} failed: {description}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, passed in sorted(_ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} [{status}] {description}")
