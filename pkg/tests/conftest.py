import numpy as np
import pytest

from mannheim_s3.mannheim import generate_pair

A_QUARTER = np.pi / 4

_acceptance = []


def partner_torsion(s):
    return 1.0 - 0.5 * s


@pytest.fixture(scope="session")
def reference_pair():
    """``(beta, alpha, report)`` for a = pi/4, tau_beta = 1 - s/2 on [0, 1] at grid 512."""
    return generate_pair(partner_torsion, A_QUARTER, (0.0, 1.0), density=512)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
