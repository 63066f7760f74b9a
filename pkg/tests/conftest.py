from fractions import Fraction

import pytest

from fatcantor.cantor_set import CantorParams
from fatcantor.riesz_coeffs import table

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def tm_tables():
    """Fourier tables at K = 4095 for the two headline measures."""
    return {g: table(CantorParams(g), 4095, 1e-12) for g in (Fraction(1, 4), Fraction(3, 4))}


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(name: str, passed: bool, detail: str):
        _ACCEPTANCE.append((name, passed, detail))
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
