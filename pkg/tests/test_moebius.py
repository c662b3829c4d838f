import numpy as np
import pytest
from hypothesis import given, strategies as st

from curvecalc.moebius import MoebiusMap, is_inf

finite = st.complex_numbers(min_magnitude=0, max_magnitude=10, allow_nan=False, allow_infinity=False)


def maps(draw):
    a, b, c, d = (draw(finite) for _ in range(4))
    while abs(a * d - b * c) < 1e-6:
        a, d = a + 1.0, d + 1.0
    return MoebiusMap(a, b, c, d)


@st.composite
def moebius_maps(draw):
    return maps(draw)


def test_identity_and_affine():
    h = MoebiusMap.identity()
    assert h(3.7 + 2j) == 3.7 + 2j
    g = MoebiusMap.affine(2.0, 1j)
    assert g(1.5) == 3.0 + 1j


def test_pole_maps_to_inf():
    h = MoebiusMap(1, 0, 1, -2)
    assert is_inf(h(2.0))
    assert h.pole == pytest.approx(2.0)


@given(moebius_maps(), moebius_maps(), finite)
def test_compose_matches_sequential(h1, h2, z):
    inner = h2(z)
    if is_inf(inner) or is_inf(h1(inner)):
        return
    combined = h1.compose(h2)(z)
    assert abs(combined - h1(inner)) <= 1e-6 * (1 + abs(h1(inner)))


@given(moebius_maps(), finite)
def test_inverse_roundtrip(h, z):
    w = h(z)
    if is_inf(w):
        return
    back = h.inverse()(w)
    if is_inf(back):
        return
    assert abs(back - z) <= 1e-6 * (1 + abs(z))


def test_derivative_matches_finite_difference():
    h = MoebiusMap(2.0 + 1j, -0.5, 0.3, 1.0)
    z = 0.7 - 0.4j
    eps = 1e-6
    fd = (h(z + eps) - h(z - eps)) / (2 * eps)
    assert abs(h.derivative(z) - fd) < 1e-7


def test_normalized_same_action(rng):
    h = MoebiusMap(3.0, 1j, 0.5, 2.0)
    g = h.normalized()
    for _ in range(5):
        z = complex(rng.standard_normal(), rng.standard_normal())
        assert abs(h(z) - g(z)) < 1e-12 * (1 + abs(h(z)))
