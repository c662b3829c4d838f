import math

import numpy as np
import pytest

from curvecalc.cauchy import (
    atom_limit,
    boundary_values,
    curve_log,
    curve_log_pv,
    curve_log_pv_near,
    eval_cauchy,
    jump_density,
    winding_number,
)
from curvecalc.curves import CurveSystem, make_curve
from curvecalc.errors import EndpointParameter, OnCurve, SectorViolation
from curvecalc.measures import Atom, CurveMeasure, PolyDensity


def test_segment_log_closed_form(rng):
    c = make_curve([-1.0, 1.0])
    for _ in range(20):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.2, 3) * rng.choice([-1, 1]))
        ref = np.log((1.0 - z) / (-1.0 - z))
        assert abs(curve_log(c, z) - ref) < 1e-12


def test_polyline_log_vanishes_at_infinity():
    c = make_curve([0.0, 1.0 + 0.5j, 2.0, 3.0 - 0.4j])
    for R in (1e3, 1e6):
        val = curve_log(c, R + R * 1j)
        assert abs(val) < 10.0 / R


def test_on_curve_raises():
    c = make_curve([0.0, 2.0])
    with pytest.raises(OnCurve):
        curve_log(c, 1.0)


def test_winding_number_square():
    sq = make_curve([0.0, 1.0, 1.0 + 1j, 1j, 0.0])
    assert winding_number(sq, 0.5 + 0.5j) == 1
    assert winding_number(sq, 3.0 + 0.5j) == 0
    assert winding_number(sq.reversed(), 0.5 + 0.5j) == -1


def test_pv_is_two_sided_average():
    c = make_curve([0.0, 1.0 + 0.6j, 2.0])
    s = 0.37 * c.length
    z = c.point_at(s)
    d = c.direction_at(s)
    eps = 1e-7
    avg = 0.5 * (curve_log(c, z + eps * 1j * d) + curve_log(c, z - eps * 1j * d))
    assert abs(curve_log_pv(c, s) - avg) < 1e-6


def test_pv_rejects_endpoints():
    c = make_curve([0.0, 1.0])
    with pytest.raises(EndpointParameter):
        curve_log_pv(c, 0.0)


def test_pv_near_matches_pv():
    c = make_curve([0.0, 1.0 + 0.5j, 2.5])
    for delta in (1e-2, 1e-5, 1e-8):
        # the parameter s = L - delta itself carries rounding of order
        # eps/delta inside the flat log, so the tolerance scales with it
        tol = 1e-12 + 100 * np.finfo(float).eps / delta
        got0 = curve_log_pv_near(c, 0, delta)[0]
        assert abs(got0 - curve_log_pv(c, delta)) < tol
        got1 = curve_log_pv_near(c, 1, delta)[0]
        assert abs(got1 - curve_log_pv(c, c.length - delta)) < tol


def test_pv_near_below_float_resolution():
    # the closed form keeps working where point_at would round to a vertex
    c = make_curve([1.0e8, 1.0e8 + 1.0])
    val = curve_log_pv_near(c, 0, 1e-30)[0]
    assert np.isfinite(val)
    assert val.real == pytest.approx(math.log(1.0) - math.log(1e-30), rel=1e-12)


def test_eval_cauchy_atoms():
    c = make_curve([0.0, 2.0])
    system = CurveSystem.of(c)
    mu = CurveMeasure(system, atoms=[Atom(0, 1.0, 2.0 + 1j)])
    q = 5.0 + 1j
    assert eval_cauchy([(1, mu)], q) == pytest.approx((2.0 + 1j) / (1.0 - q))
    assert eval_cauchy([(2, mu)], q) == pytest.approx((2.0 + 1j) / (1.0 - q) ** 2)


def test_eval_cauchy_const_density_closed_form(rng):
    from curvecalc.measures import ConstDensity

    c = make_curve([-1.0, 1.0])
    system = CurveSystem.of(c)
    mu = CurveMeasure(system, densities={0: ConstDensity(1.0)})
    for _ in range(10):
        q = complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))
        ref = np.log((1.0 - q) / (-1.0 - q))
        assert abs(eval_cauchy([(1, mu)], q) - ref) < 1e-9


def test_boundary_jump_recovers_density():
    # f+ - f- = 2 pi i d at interior points of the carrier
    c = make_curve([-1.0, 1.0])
    system = CurveSystem.of(c)
    dens = PolyDensity([0.8, 0.5])
    mu = CurveMeasure(system, densities={0: dens})
    s = 0.8
    got = jump_density([(1, mu)], 0, s)
    want = dens(np.array([s]))[0]
    assert abs(got - want) < 1e-3 * (1 + abs(want))


def test_boundary_values_report_error():
    c = make_curve([-1.0, 1.0])
    system = CurveSystem.of(c)
    mu = CurveMeasure(system, densities={0: PolyDensity([1.0])})
    out = boundary_values([(1, mu)], 0, 1.0, "Left")
    assert out.error < 1e-4


def test_atom_limit_recovers_weight():
    c = make_curve([-1.0, 1.0])
    system = CurveSystem.of(c)
    w = 1.3 - 0.4j
    mu = CurveMeasure(system, atoms=[Atom(0, 1.0, w)])
    got = atom_limit([(1, mu)], 0, 1.0, 1j)
    assert abs(got.value - w) < 1e-2 * (1 + abs(w))


def test_atom_limit_rejects_tangential_approach():
    c = make_curve([-1.0, 1.0])
    system = CurveSystem.of(c)
    mu = CurveMeasure(system, atoms=[Atom(0, 1.0, 1.0)])
    with pytest.raises(SectorViolation):
        atom_limit([(1, mu)], 0, 1.0, 1.0 + 0.01j)
