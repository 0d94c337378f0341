import math

import numpy as np
import pytest

from optspeed import numerics
from optspeed.errors import DimensionMismatch, NotPositiveDefinite, NotPseudoHermitian
from optspeed.metric import (MetricOperator, equivalent_hermitian, is_quasi_unitary,
                             metric_from_params, params_from_2x2, pseudo_adjoint, pseudo_inner,
                             pseudo_hermiticity_defect)

from conftest import E1, E2, SIGMA_Y, random_hermitian, random_pd_metric, random_state


def test_metric_caches(rng):
    for dim in (2, 3):
        eta = random_pd_metric(rng, dim, floor=0.1)
        np.testing.assert_allclose(eta.sqrt @ eta.sqrt, eta.matrix, atol=1e-12 * np.linalg.norm(eta.matrix))
        np.testing.assert_allclose(eta.inv_sqrt @ eta.sqrt, np.eye(dim), atol=1e-11)
        np.testing.assert_allclose(eta.inverse @ eta.matrix, np.eye(dim), atol=1e-11)
        with pytest.raises(ValueError):
            eta.matrix[0, 0] = 5


def test_indefinite_metric_rejected():
    with pytest.raises(NotPositiveDefinite):
        MetricOperator.from_matrix(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefinite):
        metric_from_params(1.0, 0.2, 0.5)


def test_pseudo_inner_examples():
    assert pseudo_inner(MetricOperator.identity(2), E1, E2) == 0
    assert pseudo_inner(MetricOperator.from_matrix(np.diag([1.0, 4.0])), [1, 1], [1, 1]) == 5
    assert pseudo_inner(MetricOperator.from_matrix([[1, 0.5], [0.5, 1]]), E1, E2) == 0.5
    with pytest.raises(DimensionMismatch):
        pseudo_inner(None, E1, [1, 0, 0])


def test_pseudo_inner_properties(rng):
    for dim in (2, 3):
        eta = random_pd_metric(rng, dim)
        for _ in range(20):
            phi, psi = random_state(rng, dim), random_state(rng, dim)
            assert abs(pseudo_inner(eta, phi, psi) - np.conj(pseudo_inner(eta, psi, phi))) <= 1e-12 * (
                1 + abs(pseudo_inner(eta, phi, psi)))
            n = pseudo_inner(eta, psi, psi)
            assert n.real > 0 and abs(n.imag) <= 1e-12 * n.real
            assert pseudo_inner(None, phi, psi) == pytest.approx(np.vdot(phi, psi), abs=1e-15)
            assert pseudo_inner(MetricOperator.identity(dim), phi, psi) == pytest.approx(np.vdot(phi, psi))


@pytest.mark.parametrize("matrix, expected", [
    (np.eye(2), dict(a=1, c=1, D=1, k1=0.25, k2=0, k3=0)),
    # D = 1/4, k1 = 0.25 / 1.25^2, k2 = 0.75 / 1.25
    (np.diag([1.0, 0.25]), dict(a=1, c=0.25, D=0.25, k1=0.16, k2=0.6, k3=0)),
    (np.array([[2.0, 1.0], [1.0, 2.0]]), dict(a=2, c=2, D=3, k1=3 / 16, k2=0, k3=0.5)),
])
def test_params_examples(matrix, expected):
    p = params_from_2x2(MetricOperator.from_matrix(matrix))
    for key, value in expected.items():
        assert getattr(p, key) == pytest.approx(value, abs=1e-15)


def test_params_identity_is_exact():
    p = params_from_2x2(MetricOperator.identity(2))
    assert (p.k1, p.k2, p.k3, p.b, p.beta) == (0.25, 0.0, 0.0, 0, 0.0)


def test_params_beta_uses_lower_left_entry():
    p = params_from_2x2(metric_from_params(2.0, 3.0, complex(-0.5, 0.5)))
    assert p.b == complex(-0.5, 0.5)
    assert p.beta == pytest.approx(3 * math.pi / 4)
    # b1 = 0 is the case where a plain arctan of b2/b1 breaks down
    assert params_from_2x2(metric_from_params(2.0, 3.0, 0.5j)).beta == pytest.approx(math.pi / 2)


def test_params_ranges(rng):
    for _ in range(1000):
        p = params_from_2x2(random_pd_metric(rng, 2))
        assert p.k1 > 0 and -1 < p.k2 < 1 and 0 <= p.k3 < 1


def test_params_needs_2x2():
    with pytest.raises(DimensionMismatch):
        params_from_2x2(MetricOperator.identity(3))


def test_pseudo_adjoint_examples(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    np.testing.assert_allclose(pseudo_adjoint(MetricOperator.identity(2), A), A.conj().T)
    c = 0.3
    eta = MetricOperator.from_matrix(np.diag([1.0, c]))
    A = 1j * np.array([[0, -math.sqrt(c)], [1 / math.sqrt(c), 0]])
    np.testing.assert_allclose(pseudo_adjoint(eta, A), A, atol=1e-15)
    eta = random_pd_metric(rng, 3)
    np.testing.assert_allclose(pseudo_adjoint(eta, np.eye(3)), np.eye(3), atol=1e-9)


def test_pseudo_adjoint_involution(rng):
    for _ in range(50):
        eta = random_pd_metric(rng, 2, floor=0.1)
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        back = pseudo_adjoint(eta, pseudo_adjoint(eta, A))
        assert np.linalg.norm(back - A) <= 1e-12 * np.linalg.norm(A) * np.linalg.cond(eta.matrix)


def test_quasi_unitary_examples():
    theta = 0.3
    R = numerics.matrix_exponential(theta * np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert is_quasi_unitary(MetricOperator.identity(2), R)
    eta = MetricOperator.from_matrix(np.diag([1.0, 0.25]))
    U = numerics.matrix_exponential(theta * np.array([[0.0, -0.5], [2.0, 0.0]]))
    assert is_quasi_unitary(eta, U)
    assert not is_quasi_unitary(eta, R)


def test_equivalent_hermitian_examples():
    E = 1.7
    H = 1j * E * np.array([[0, -0.5], [2, 0]])
    h = equivalent_hermitian(MetricOperator.from_matrix(np.diag([1.0, 0.25])), H)
    np.testing.assert_allclose(h, E * SIGMA_Y, atol=1e-15)
    for c in (4.0, 0.01, 1e-4):
        H = 1j * E * np.array([[0, -math.sqrt(c)], [1 / math.sqrt(c), 0]])
        h = equivalent_hermitian(MetricOperator.from_matrix(np.diag([1.0, c])), H)
        np.testing.assert_allclose(h, E * SIGMA_Y, atol=1e-12)
    Hh = np.array([[1.0, 2 - 1j], [2 + 1j, -3.0]])
    np.testing.assert_allclose(equivalent_hermitian(None, Hh), Hh)


def test_equivalent_hermitian_rejects(rng):
    with pytest.raises(NotPseudoHermitian):
        equivalent_hermitian(MetricOperator.from_matrix(np.diag([1.0, 0.25])), SIGMA_Y * 1j + np.eye(2))


def test_equivalent_hermitian_recovers(rng):
    for dim in (2, 3):
        for _ in range(100):
            eta = random_pd_metric(rng, dim)
            h = random_hermitian(rng, dim)
            H = eta.inv_sqrt @ h @ eta.sqrt
            assert pseudo_hermiticity_defect(eta, H) <= 1e-9
            back = equivalent_hermitian(eta, H)
            assert np.linalg.norm(back - h) <= 1e-10 * np.linalg.norm(h)
            np.testing.assert_allclose(np.linalg.eigvalsh(back), np.linalg.eigvalsh(h),
                                       atol=1e-10 * np.linalg.norm(h))
