import numpy as np
import pytest

from curvecalc.errors import MultiValued, NotInDomain
from curvecalc.linrel import (
    LinearRelation,
    as_relation,
    iterated_resolvent,
    resolvent_apply,
)
from curvecalc.moebius import MoebiusMap


def test_from_matrix_apply_is_matvec(rng):
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    A = LinearRelation.from_matrix(M)
    assert A.is_operator()
    np.testing.assert_allclose(A.apply(u), M @ u, atol=1e-12)


def test_moebius_apply_matches_matrix_formula(rng):
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = MoebiusMap(2.0, 1j, 0.5, 1.0)
    hA = as_relation(M).moebius_apply(h)
    eye = np.eye(3)
    ref = (2.0 * M + 1j * eye) @ np.linalg.inv(0.5 * M + eye)
    u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    np.testing.assert_allclose(hA.apply(u), ref @ u, atol=1e-10)


def test_resolvent_apply_matches_inverse(rng):
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    w = 10.0 + 3j
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    ref = np.linalg.solve(w * np.eye(4) - M, u)
    np.testing.assert_allclose(resolvent_apply(M, w, u), ref, atol=1e-10)


def test_resolvent_identity_single_instance(rng):
    # (w1-A)^-1 (w2-A)^-1 u = ((w2-A)^-1 - (w1-A)^-1) u / (w1-w2)
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    w1, w2 = 8.0 + 2j, -7.0 + 5j
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    lhs = iterated_resolvent(M, [w1, w2], u)
    rhs = (resolvent_apply(M, w2, u) - resolvent_apply(M, w1, u)) / (w1 - w2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_inverse_relation_swaps_graph():
    M = np.array([[2.0, 0.0], [0.0, 5.0]], dtype=complex)
    A = as_relation(M)
    inv = A.inverse()
    u = np.array([1.0, 1.0], dtype=complex)
    np.testing.assert_allclose(inv.apply(u), [0.5, 0.2], atol=1e-12)


def test_singular_operator_inverse_is_relation():
    # inverse of a rank-deficient operator is not single valued at 0
    M = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    inv = as_relation(M).inverse()
    assert not inv.is_operator()
    with pytest.raises(MultiValued):
        inv.apply(np.array([0.0, 0.0], dtype=complex))


def test_not_in_domain():
    # graph {(c, 0)}: only 0 is in the domain
    A = LinearRelation(np.array([[1.0]], dtype=complex), np.array([[0.0]], dtype=complex))
    assert not A.is_operator()
    with pytest.raises(NotInDomain):
        A.apply(np.array([1.0], dtype=complex))


def test_equals_invariant_under_column_mixing(rng):
    Y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    A = LinearRelation(Y, X)
    C = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    B = LinearRelation(Y @ C, X @ C)
    assert A.equals(B)


def test_moebius_composition_on_relations(rng):
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h1 = MoebiusMap(1.0, 2.0, 0.0, 1.0)
    h2 = MoebiusMap(0.0, 1.0, 1.0, -5.0)
    A = as_relation(M)
    once = A.moebius_apply(h1.compose(h2))
    twice = A.moebius_apply(h2).moebius_apply(h1)
    assert once.equals(twice)
