import mpmath
import pytest


def oracle_value(n, gamma, prec=400):
    """|cos n|^(n^gamma) straight from mpmath, which does its own argument reduction."""
    with mpmath.workprec(prec):
        return float(abs(mpmath.cos(n)) ** (mpmath.mpf(n) ** mpmath.mpf(gamma)))


def oracle_residual(n, prec=400):
    with mpmath.workprec(prec):
        q = int(mpmath.nint(n / mpmath.pi))
        return q, float(n - q * mpmath.pi)


@pytest.fixture
def oracle():
    return oracle_value


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
