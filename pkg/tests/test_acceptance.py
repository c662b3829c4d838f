"""End-to-end acceptance checks.

Each test runs one randomized suite (or a named slice of one) at full
size and requires zero failing rows at the stated tolerances.  The two
heavy suites are computed once per session and shared.
"""

import numpy as np
import pytest

from curvecalc import checks


def failing(rows, prefix=None):
    picked = [r for r in rows if prefix is None or r["name"].startswith(prefix)]
    assert picked, f"no rows matched prefix {prefix!r}"
    return picked, [r for r in picked if not r["passed"]]


def report(picked, bad):
    worst = max(picked, key=lambda r: r["value"] / (r["tol"] or 1.0))
    return (
        f"{len(picked) - len(bad)}/{len(picked)} passed; "
        f"worst {worst['name']}: {worst['value']:.3e} (tol {worst['tol']:.1e})"
    )


@pytest.fixture(scope="session")
def powers_rows():
    rows, _ok = checks.run_suite("powers", seed=23)
    return rows


@pytest.fixture(scope="session")
def estimates_rows():
    rows, _ok = checks.run_suite("estimates", n=1000, seed=29)
    return rows


@pytest.fixture(scope="session")
def reductions_rows():
    rows, _ok = checks.run_suite("reductions", n=50, seed=11)
    return rows


def test_01_resolvent_identity():
    rows, ok = checks.run_suite("resolvent", n=100, seed=7)
    picked, bad = failing(rows)
    assert ok and not bad, report(picked, bad)


def test_02_scalar_consistency(powers_rows):
    picked, bad = failing(powers_rows, "scalar_")
    assert not bad, report(picked, bad)


def test_03_oracle_equivalence(powers_rows):
    picked, bad = failing(powers_rows, "sqrt_oracle")
    assert len(picked) == 50, "needs 50 oracle instances"
    assert not bad, report(picked, bad)


def test_04_semigroup_and_local_group(powers_rows):
    picked, bad = failing(powers_rows, "semigroup")
    picked2, bad2 = failing(powers_rows, "local_group")
    assert not bad and not bad2, report(picked + picked2, bad + bad2)


def test_05_well_definedness():
    rows, ok = checks.run_suite("welldef", seed=13)
    picked, bad = failing(rows)
    assert ok and not bad, report(picked, bad)


def test_06_multiplicativity():
    rows, ok = checks.run_suite("multiplicativity", n=50, seed=17)
    picked, bad = failing(rows)
    assert len(picked) == 50
    assert ok and not bad, report(picked, bad)


def test_07_locality_with_negative_control():
    rows, ok = checks.run_suite("locality", seed=19, negative_control=True)
    picked, bad = failing(rows, "exterior")
    controls, bad_controls = failing(rows, "interior_control")
    assert controls, "negative control rows missing"
    assert ok and not bad and not bad_controls, report(picked + controls, bad + bad_controls)


def test_08_reduction_invariance(reductions_rows):
    picked_a, bad_a = failing(reductions_rows, "additive")
    picked_m, bad_m = failing(reductions_rows, "multiplicative")
    assert len(picked_a) == 50 and len(picked_m) == 50
    assert not bad_a and not bad_m, report(picked_a + picked_m, bad_a + bad_m)


def test_09_cycle_vanishing(reductions_rows):
    picked, bad = failing(reductions_rows, "cycle_")
    assert not bad, report(picked, bad)


def test_10_scalar_function_theory():
    rows, ok = checks.run_suite("cauchy", seed=3)
    picked, bad = failing(rows)
    assert ok and not bad, report(picked, bad)


def test_11_estimate_lemmas(estimates_rows):
    picked, bad = failing(estimates_rows, "lemma_")
    violations = [r for r in picked if r["name"].endswith("violations")]
    assert len([r for r in violations if "exhaustive" not in r["name"]]) == 9
    assert not bad, report(picked, bad)


def test_12_u_s_continuation(powers_rows):
    picked, bad = failing(powers_rows, "u_s_closed")
    picked2, bad2 = failing(powers_rows, "u_s_continuity")
    assert not bad and not bad2, report(picked + picked2, bad + bad2)
