"""Shared fixtures plus per-criterion reporting for the acceptance suite.

Acceptance tests are named test_cNN_*; the hook below aggregates their
outcomes (including parametrized cases) and prints one PASS/FAIL line per
criterion at the end of the session.
"""

import re
from collections import defaultdict

import pytest

from ecscalar.registry import load_builtin

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_c(\d+)")
_criterion_outcomes: dict[int, list[bool]] = defaultdict(list)


@pytest.fixture(scope="session")
def toy29():
    return load_builtin("toy29").params


@pytest.fixture(scope="session")
def p192():
    return load_builtin("p192").params


@pytest.fixture(scope="session")
def p224():
    return load_builtin("p224").params


@pytest.fixture(scope="session")
def p256():
    return load_builtin("p256").params


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _CRITERION_RE.search(report.nodeid)
    if match:
        _criterion_outcomes[int(match.group(1))].append(report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_criterion_outcomes):
        outcomes = _criterion_outcomes[criterion]
        verdict = "PASS" if all(outcomes) else "FAIL"
        detail = f"{sum(outcomes)}/{len(outcomes)} checks"
        terminalreporter.write_line(
            f"criterion {criterion:2d}: {verdict}  ({detail})"
        )
