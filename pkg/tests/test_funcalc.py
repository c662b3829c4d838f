import cmath

import numpy as np
import pytest

from curvecalc.curves import CurveSystem, make_curve
from curvecalc.errors import GrowthViolation, ResolventFailure
from curvecalc.funcalc import (
    CalculusContext,
    curve_log_op,
    evaluate,
    local_group_check,
    oracle,
    power_domain,
    principal_power_op,
    u_s_continuation,
)
from curvecalc.normalform import (
    curve_power_form,
    principal_log_form,
    principal_power_form,
)


def diagonalizable(rng, d, center, radius, skew=0.35):
    lam = center + radius * (rng.uniform(-1, 1, d) + 1j * rng.uniform(-1, 1, d))
    V = np.eye(d) + skew * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return V @ np.diag(lam) @ np.linalg.inv(V), lam, V


def test_scalar_sqrt():
    ctx = CalculusContext(np.array([[4.0 + 0j]]))
    u = np.array([1.0 + 0j])
    out = evaluate(ctx, principal_power_form(0.5), u)
    assert abs(out[0] - 2.0) < 1e-7


def test_scalar_log(rng):
    nf = principal_log_form()
    for _ in range(5):
        a = complex(rng.uniform(0.5, 3), rng.uniform(-2, 2))
        ctx = CalculusContext(np.array([[a]]))
        out = evaluate(ctx, nf, np.array([1.0 + 0j]))
        assert abs(out[0] - cmath.log(a)) < 1e-7 * (1 + abs(cmath.log(a)))


def test_matrix_sqrt_against_eigendecomposition(rng):
    M, lam, V = diagonalizable(rng, 5, 4.0 + 0j, 1.0)
    u = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    ctx = CalculusContext(M)
    got = evaluate(ctx, principal_power_form(0.5), u)
    ref = oracle(ctx, np.sqrt, u)
    assert np.linalg.norm(got - ref) < 1e-6 * np.linalg.norm(ref)


def test_sqrt_squares_to_operator(rng):
    M, _lam, _V = diagonalizable(rng, 4, 3.0 + 1j, 0.8)
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    ctx = CalculusContext(M)
    half = evaluate(ctx, principal_power_form(0.5), u)
    full = evaluate(ctx, principal_power_form(0.5), half)
    ref = M @ u
    assert np.linalg.norm(full - ref) < 1e-6 * np.linalg.norm(ref)


def test_resolvent_failure_on_cut():
    # an eigenvalue on the closed negative half line meets the carrier
    ctx = CalculusContext(np.array([[-1.0 + 0j]]))
    with pytest.raises(ResolventFailure) as exc:
        evaluate(ctx, principal_power_form(0.5), np.array([1.0 + 0j]))
    assert exc.value.node is not None


def test_balakrishnan_power_matches_evaluate(rng):
    M, _lam, _V = diagonalizable(rng, 4, 4.0 + 0j, 1.0)
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    ctx = CalculusContext(M)
    got = principal_power_op(ctx, 0.5, u)
    ref = evaluate(ctx, principal_power_form(0.5), u)
    assert np.linalg.norm(got - ref) < 1e-6 * (1 + np.linalg.norm(ref))


def test_power_alpha_range():
    ctx = CalculusContext(np.array([[2.0 + 0j]]))
    with pytest.raises(GrowthViolation):
        principal_power_op(ctx, 1.5, np.array([1.0 + 0j]))


def test_u_s_closed_form(rng):
    alpha = 0.5
    for _ in range(5):
        a = complex(rng.uniform(0.5, 3), rng.uniform(-1, 1))
        ctx = CalculusContext(np.array([[a]]))
        u = np.array([1.0 + 0j])
        for s in (-0.5, 0.0, 0.5, 0.9):
            got = u_s_continuation(ctx, alpha, s, u)[0]
            ref = ((1 + s) / 2 + (1 - s) * a / 2) ** alpha
            assert abs(got - ref) < 1e-6 * (1 + abs(ref))


def test_u_s_endpoint_is_identity():
    ctx = CalculusContext(np.array([[2.0 + 0j]]))
    u = np.array([3.0 + 1j])
    np.testing.assert_allclose(u_s_continuation(ctx, 0.5, 1.0, u), u)


def test_curve_log_op_scalar(rng):
    from curvecalc.cauchy import curve_log

    c = make_curve([0.0, 1.0 + 0.4j, 2.0])
    for _ in range(4):
        a = complex(rng.uniform(-2, 4), rng.uniform(1.0, 3))
        ctx = CalculusContext(np.array([[a]]))
        got = curve_log_op(ctx, c, np.array([1.0 + 0j]))[0]
        ref = curve_log(c, a)
        assert abs(got - ref) < 1e-7 * (1 + abs(ref))


def test_local_group_scalar(rng):
    c = make_curve([0.0, 1.0 + 0.3j, 2.0])
    a = 1.0 + 2.0j
    ctx = CalculusContext(np.array([[a]]))
    u = np.array([1.0 + 0j])
    rep = local_group_check(ctx, c, 0.4, 0.4, u)
    assert rep["relative"] < 1e-6


def test_power_domain_report(rng):
    M, _lam, _V = diagonalizable(rng, 3, 4.0 + 0j, 0.5)
    ctx = CalculusContext(M)
    u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    rep = power_domain(ctx, 0.5, 0.1, u)
    assert rep.bounded
    assert np.isfinite(rep.bound)
