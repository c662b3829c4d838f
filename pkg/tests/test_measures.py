import numpy as np
import pytest

from curvecalc.cauchy import eval_cauchy
from curvecalc.curves import CurveSystem, make_curve
from curvecalc.measures import (
    Atom,
    ConstDensity,
    CurveMeasure,
    PolyDensity,
    additive_reduce,
    multiplicative_reduce,
    omega_measure,
    pushforward_moebius,
    total_mass,
    total_variation,
    xi_measure,
)
from curvecalc.moebius import MoebiusMap


def seg_system(a=0.0, b=2.0):
    return CurveSystem.of(make_curve([a, b]))


def test_total_mass_const_density():
    # dzeta = dt on a horizontal segment, so the mass is value * length
    system = seg_system()
    mu = CurveMeasure(system, densities={0: ConstDensity(1.5)})
    assert total_mass(mu) == pytest.approx(3.0, abs=1e-12)


def test_total_mass_poly_density():
    # int_0^2 (1 + 2t) dt = 6
    system = seg_system()
    mu = CurveMeasure(system, densities={0: PolyDensity([1.0, 2.0])})
    assert total_mass(mu) == pytest.approx(6.0, abs=1e-10)


def test_total_mass_includes_atoms():
    system = seg_system()
    mu = CurveMeasure(system, atoms=[Atom(0, 0.5, 2.0 + 1j), Atom(0, 1.5, -1.0)])
    assert total_mass(mu) == pytest.approx(1.0 + 1j)
    assert total_variation(mu) == pytest.approx(abs(2.0 + 1j) + 1.0)


def test_total_mass_oriented():
    # direction flips sign on a reversed segment
    mu = CurveMeasure(seg_system(2.0, 0.0), densities={0: ConstDensity(1.0)})
    assert total_mass(mu) == pytest.approx(-2.0, abs=1e-12)


def test_omega_measure_mass():
    # -chi_(a1,b1) d zeta has mass -(b1 - a1)
    system = seg_system()
    mu = omega_measure(system, 0, 0.3, 1.7)
    assert total_mass(mu) == pytest.approx(-1.4, abs=1e-10)


def test_xi_measure_degenerates_to_atom():
    system = seg_system()
    mu = xi_measure(system, 0, 1.0, 1.0)
    assert mu.atoms and not mu.densities
    assert total_mass(mu) == pytest.approx(1.0)


def test_measure_sum_and_scale():
    system = seg_system()
    mu = CurveMeasure(system, atoms=[Atom(0, 1.0, 2.0)], densities={0: ConstDensity(1.0)})
    two = mu + mu
    assert total_mass(two) == pytest.approx(2 * total_mass(mu), abs=1e-10)
    assert total_mass(mu.scaled(-3.0)) == pytest.approx(-3 * total_mass(mu), abs=1e-10)


def test_additive_reduce_identity(rng):
    # int mu/(zeta-q)^n = c_n/(zeta0-q)^n + int n theta/(zeta-q)^(n+1)
    c = make_curve([0.0, 1.0 + 0.4j, 2.0])
    system = CurveSystem.of(c)
    mu = CurveMeasure(
        system,
        atoms=[Atom(0, 0.4 * c.length, 1.0 - 0.5j)],
        densities={0: PolyDensity([0.7, 0.2j])},
    )
    base = (0, 0.5 * c.length)
    zeta0 = c.point_at(base[1])
    for n in (1, 2):
        c_n, theta = additive_reduce(mu, n, base)
        for _ in range(5):
            q = complex(rng.uniform(-3, 5), rng.uniform(2, 5))
            lhs = eval_cauchy([(n, mu)], q)
            rhs = c_n / (zeta0 - q) ** n + eval_cauchy([(n + 1, theta.scaled(n))], q)
            assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))


def test_multiplicative_reduce_identity(rng):
    # product of two first-level integrals equals the reduced sum
    c = make_curve([0.0, 1.0, 2.0 + 0.5j])
    system = CurveSystem.of(c)
    mu1 = CurveMeasure(system, atoms=[Atom(0, 0.3 * c.length, 1.2)])
    mu2 = CurveMeasure(system, atoms=[Atom(0, 0.8 * c.length, -0.7 + 0.3j)])
    terms = multiplicative_reduce(mu1, 0, mu2, 0)
    for _ in range(5):
        q = complex(rng.uniform(-3, 5), rng.uniform(2, 6))
        lhs = eval_cauchy([(1, mu1)], q) * eval_cauchy([(1, mu2)], q)
        rhs = sum(eval_cauchy([(k, th)], q) for k, th in terms)
        assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))


def test_pushforward_affine_preserves_cauchy(rng):
    # affine maps need no arc subdivision: exact transport of the measure
    c = make_curve([0.0, 1.0 + 0.3j, 2.0])
    system = CurveSystem.of(c)
    mu = CurveMeasure(system, densities={0: ConstDensity(1.0)})
    h = MoebiusMap.affine(1.5 - 0.2j, 0.7)
    nu = pushforward_moebius(mu, h)
    # the density absorbs the parameter change, so the mass carries over
    assert total_mass(nu) == pytest.approx(total_mass(mu), abs=1e-9)


def test_restrict_component():
    c1 = make_curve([0.0, 1.0])
    c2 = make_curve([5.0, 6.0])
    system = CurveSystem.of(c1, c2)
    mu = CurveMeasure(system, atoms=[Atom(0, 0.5, 1.0), Atom(1, 0.5, 2.0)])
    comp = system.components[1]
    part = mu.restrict_component(comp)
    assert total_mass(part) == pytest.approx(2.0)
