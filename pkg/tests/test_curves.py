import math

import numpy as np
import pytest

from curvecalc.curves import (
    CurveSystem,
    forward_cone,
    make_curve,
    side_of,
    transversal_angle,
)
from curvecalc.errors import DegenerateSegment, SelfIntersection


def test_length_is_chord_sum():
    c = make_curve([0.0, 3.0, 3.0 + 4j])
    assert c.length == pytest.approx(3.0 + 4.0)
    assert c.nseg == 2


def test_point_and_direction():
    c = make_curve([0.0, 2.0, 2.0 + 2j])
    assert c.point_at(1.0) == pytest.approx(1.0)
    assert c.point_at(3.0) == pytest.approx(2.0 + 1j)
    assert c.direction_at(0.5) == pytest.approx(1.0)
    assert c.direction_at(3.0) == pytest.approx(1j)


def test_rejects_self_intersection():
    with pytest.raises(SelfIntersection):
        make_curve([0.0, 1.0 + 1j, 1.0, 1j])


def test_rejects_coincident_vertices():
    with pytest.raises(DegenerateSegment):
        make_curve([0.0, 0.0, 1.0])
    with pytest.raises(DegenerateSegment):
        make_curve([1.0])


def test_closed_curve_detected():
    sq = make_curve([0.0, 1.0, 1.0 + 1j, 1j, 0.0])
    assert sq.closed
    assert not make_curve([0.0, 1.0, 1.0 + 1j]).closed


def test_distance_to_matches_dense_sampling(rng):
    c = make_curve([0.0, 1.0 + 0.5j, 2.0 - 0.3j, 3.0 + 0.2j])
    for _ in range(20):
        z = complex(rng.uniform(-1, 4), rng.uniform(-2, 2))
        dist, _t = c.distance_to(z)
        ts = np.linspace(0.0, c.length, 4001)
        brute = float(np.min(np.abs(c.point_at(ts) - z)))
        assert dist <= brute + 1e-12
        assert dist >= brute - 1e-3


def test_forward_cone_of_graph():
    # slopes +-1 about the real axis: semi-angle pi/4
    c = make_curve([0.0, 1.0 + 1j, 2.0, 3.0 - 1j, 4.0])
    cone = forward_cone(c)
    assert cone.semi_angle == pytest.approx(math.pi / 4)
    assert math.cos(cone.axis) == pytest.approx(1.0, abs=1e-12)


def test_transversal_angle_segment():
    c = make_curve([0.0, 1.0])
    assert transversal_angle(c, 1j) == pytest.approx(math.pi / 2)
    assert transversal_angle(c, np.exp(1j * 0.3)) == pytest.approx(0.3)


def test_side_of_segment():
    c = make_curve([0.0, 1.0])
    assert side_of(c, 0.5 + 1j) == "Left"
    assert side_of(c, 0.5 - 1j) == "Right"
    assert side_of(c, 0.5) == "On"


def test_reversed_swaps_ends():
    c = make_curve([0.0, 1.0, 1.0 + 1j])
    r = c.reversed()
    assert r.start == c.end
    assert r.end == c.start
    assert r.length == pytest.approx(c.length)


def test_system_nodes_and_components():
    c1 = make_curve([0.0, 1.0])
    c2 = make_curve([1.0, 1.0 + 1j])
    c3 = make_curve([5.0, 6.0])
    system = CurveSystem.of(c1, c2, c3)
    assert system.n_components == 2
    comps = system.components
    assert comps[0] == comps[1]
    assert comps[2] != comps[0]


def test_locate_on_and_off():
    c = make_curve([0.0, 2.0])
    system = CurveSystem.of(c)
    ci, t, dist = system.locate(1.0)
    assert ci == 0
    assert t == pytest.approx(1.0)
    assert dist == pytest.approx(0.0, abs=1e-12)
    _ci, _t, dist = system.locate(1.0 + 1j)
    assert dist == pytest.approx(1.0)
