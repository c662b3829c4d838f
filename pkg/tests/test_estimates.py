import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvecalc.curves import make_curve
from curvecalc.errors import NegativeWeight
from curvecalc.estimates import (
    LEMMAS,
    _inv_pow_integral,
    exhaustive_rearrangement_check,
    random_config,
    rearrangement_check,
    run_lemma,
    straighten,
    straightened_product_integral,
    verify_inequality,
)


def test_straighten_sorting_example():
    F = straighten([3.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    assert F(0.5) == 3.0
    assert F(1.5) == 2.0
    assert F(2.5) == 1.0
    assert F(3.5) == 0.0


def test_straighten_drops_zero_weights():
    F = straighten([5.0, 4.0], [0.0, 2.0])
    assert F.total_mass == 2.0
    assert F(0.5) == 4.0


def test_straighten_rejects_negative_weights():
    with pytest.raises(NegativeWeight):
        straighten([1.0], [-1.0])


@given(
    st.lists(st.floats(0.0, 10.0), min_size=1, max_size=8),
    st.lists(st.floats(0.0, 5.0), min_size=1, max_size=8),
)
@settings(max_examples=60, deadline=None)
def test_straighten_preserves_integral(vals, wts):
    m = min(len(vals), len(wts))
    vals, wts = np.array(vals[:m]), np.array(wts[:m])
    F = straighten(vals, wts)
    assert F.integral() == pytest.approx(float(np.sum(vals * wts)), abs=1e-9)


@given(
    st.integers(1, 5),
    st.integers(1, 3),
    st.integers(0, 10_000),
)
@settings(max_examples=60, deadline=None)
def test_rearrangement_never_below_product(m, p, seed):
    rng = np.random.default_rng(seed)
    F = rng.uniform(0, 3, size=(p, m))
    w = rng.uniform(0, 2, size=m)
    rep = rearrangement_check(F, w)
    assert rep["holds"]


def test_rearrangement_monotone_equality():
    # identically ordered rows pair up exactly with their straightenings
    F = np.array([[1.0, 2.0, 3.0], [0.5, 1.5, 2.5]])
    w = np.array([1.0, 2.0, 1.0])
    rep = rearrangement_check(F, w)
    assert rep["monotone"] and rep["equality"]


def test_exhaustive_small_instances():
    rep = exhaustive_rearrangement_check(max_points=3)
    assert rep["violations"] == 0
    assert rep["equality_failures"] == 0


def test_inv_square_integral_closed_form():
    # straight segment, point at distance 1: int_0^L dt/(t^2+1)
    c = make_curve([0.0, 2.0])
    val = _inv_pow_integral(c, 1.0j + 1.0, 2)
    assert val == pytest.approx(2 * math.atan(1.0), abs=1e-12)


def test_inv_first_power_matches_quadrature():
    c = make_curve([0.0, 1.0 + 0.5j, 2.0])
    s = 0.7 - 0.9j
    val = _inv_pow_integral(c, s, 1)
    ts = np.linspace(0.0, c.length, 200_001)
    mids = 0.5 * (ts[:-1] + ts[1:])
    brute = float(np.sum(np.abs(c.point_at(mids) - s) ** -1.0) * (ts[1] - ts[0]))
    assert val == pytest.approx(brute, rel=1e-6)


def test_perpendicular_segment_bound():
    # the inverse-square integral from a perpendicular foot never exceeds
    # pi/|xi|, the half-line bound with beta = pi/2 and alpha = 0
    for L, x in ((1.0, 0.5), (4.0, 1.0), (10.0, 0.1)):
        c = make_curve([0.0, L])
        val = _inv_pow_integral(c, 1j * x, 2)
        assert val <= math.pi / x * (1 + 1e-12)


@pytest.mark.parametrize("lemma", LEMMAS)
def test_lemma_spot_check(lemma):
    rng = np.random.default_rng(99)
    for _ in range(10):
        rep = verify_inequality(lemma, random_config(lemma, rng))
        assert rep["holds"], (lemma, rep)


def test_run_lemma_returns_margins():
    out = run_lemma("3.4b", n=5, seed=0)
    assert len(out) == 5
    assert all("margin" in r for r in out)


def test_straightened_product_of_indicators():
    F1 = straighten([1.0], [2.0])
    F2 = straighten([3.0], [1.0])
    assert straightened_product_integral([F1, F2]) == pytest.approx(3.0)
