"""Acceptance battery at full scope, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines.
"""

import json
import subprocess
import sys
from math import gcd

import pytest

from arithbf.bf_gm import FieldData, GMInstance, path_integral_gm
from arithbf.reports import mask_timing
from arithbf.selftest import CHECKS, run_check

# wall-clock ceilings in seconds for a whole check; None means no stated limit
TIME_LIMITS = {
    "1": 12 * 8 * 1.0,
    "2": 10 * 1.0,
    "3": None,
    "4": 60.0,
    "5": 10.0,
    "6": None,
    "7": 120.0,
    "8": 10.0,
    "9": None,
}


@pytest.mark.parametrize("name, fn", CHECKS, ids=[name.split()[1] for name, _ in CHECKS])
def test_criterion(name, fn):
    result = run_check(name, fn, "full")
    number = name.split()[0]
    limit = TIME_LIMITS[number]
    in_time = limit is None or result.elapsed < limit
    ok = result.ok and in_time
    timing = f"{result.elapsed:.2f}s" + (f" (limit {limit:.0f}s)" if limit else "")
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {name}: {result.detail} [{timing}]")
    assert result.ok, result.detail
    assert in_time, f"took {result.elapsed:.1f}s, limit {limit}s"


@pytest.mark.parametrize(
    "D, n, want", [(-23, 3, 3), (-4, 2, 2), (-3, 6, 6), (-39, 2, 8), (-47, 5, 5)]
)
def test_spot_values(D, n, want):
    rep = path_integral_gm(GMInstance(FieldData.from_discriminant(D), n))
    assert rep.brute_force_value == rep.closed_form_value == want


@pytest.mark.parametrize("n", range(3, 31, 3))
def test_stabilized_values(n):
    rep = path_integral_gm(GMInstance(FieldData.from_discriminant(-23), n))
    assert rep.brute_force_value == gcd(2, n) * 3


def _cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "arithbf", *argv, "--format", "json"],
        capture_output=True, text=True, check=True,
    )
    return json.dumps(mask_timing(json.loads(proc.stdout)))


@pytest.mark.parametrize(
    "argv", [("gm", "--disc", "-39", "--n", "12"), ("av", "--random", "--seed", "5", "--n", "8")]
)
def test_cli_reports_identical_across_jobs(argv):
    outs = {_cli(*argv, "--jobs", j) for j in ("1", "4", "16")}
    assert len(outs) == 1


def test_selftest_full_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "arithbf", "selftest", "full"], capture_output=True, text=True
    )
    print("\n" + proc.stdout.strip())
    assert proc.returncode == 0
    assert "9/9 checks passed" in proc.stdout
