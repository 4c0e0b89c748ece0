"""Acceptance gate: every verification criterion, one test line each.

Run with ``-v`` to get one pass/fail line per criterion; the assertion
message carries the measured value and tolerance on failure.
"""

import pytest

from pathtele.verify import CRITERION_NAMES, run_all


@pytest.fixture(scope="module")
def report():
    return run_all()


def test_every_criterion_is_covered(report):
    assert tuple(r.name for r in report.results) == CRITERION_NAMES


@pytest.mark.parametrize("name", CRITERION_NAMES)
def test_criterion(report, name):
    result = next(r for r in report.results if r.name == name)
    detail = "; ".join(
        f"{c.label} = {c.measured:.6e} (tolerance {c.tolerance:.1e})"
        for c in result.checks
    )
    print(f"{'PASS' if result.passed else 'FAIL'} {name}: {detail}")
    assert result.passed, f"{name}: {detail}"


def test_suite_passes_overall(report):
    assert report.passed
    assert report.failing() == ()
