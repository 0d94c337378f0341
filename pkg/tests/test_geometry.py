import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from optspeed.errors import NegativeVariance, PointAtInfinity, TooFewSamples
from optspeed.evolution import Trajectory, sample_trajectory
from optspeed.geometry import (ChartPointSpherical, ChartPointXY, chart_line_element_spherical,
                               chart_line_element_xy, chart_state, cos_distance, energy_uncertainty,
                               geodesic_distance, line_element_squared, path_length, spherical_to_xy,
                               xy_to_spherical)
from optspeed.metric import MetricOperator, params_from_2x2

from conftest import E1, E2, SIGMA_Y, random_hermitian, random_pd_metric, random_state

ETA4 = MetricOperator.from_matrix(np.diag([1.0, 4.0]))


@pytest.mark.parametrize("metric, a, b, expected", [
    (None, E1, E2, math.pi / 2),
    (None, np.array([1, 2j]), 3j * np.array([1, 2j]), 0.0),
    (None, E1, np.array([1, 1]) / math.sqrt(2), math.pi / 4),
    (ETA4, E1, np.array([1, 1]), math.acos(1 / math.sqrt(5))),
])
def test_distance_examples(metric, a, b, expected):
    assert geodesic_distance(metric, a, b) == pytest.approx(expected, abs=1e-15)


def test_distance_by_quadrature_along_great_circle():
    # psi(u) = (cos u, sin u) has |dpsi|^2 = 1, no projective loss, so ds = du
    def speed(u):
        psi = np.array([math.cos(u), math.sin(u)])
        dpsi = np.array([-math.sin(u), math.cos(u)])
        return math.sqrt(line_element_squared(None, psi, dpsi))
    length, _ = quad(speed, 0.0, math.pi / 4, epsabs=1e-14)
    assert length == pytest.approx(geodesic_distance(None, E1, [1, 1]), abs=1e-13)


def test_distance_eta_by_quadrature():
    # eta = diag(1,4): the curve (cos t, 2 sin t)/... reaches the ray of (1,1) at tan t = 1/2
    t1 = math.atan(0.5)

    def speed(t):
        psi = np.array([math.cos(t), 2 * math.sin(t)])
        dpsi = np.array([-math.sin(t), 2 * math.cos(t)])
        return math.sqrt(line_element_squared(MetricOperator.from_matrix(np.diag([1.0, 0.25])), psi, dpsi))
    length, _ = quad(speed, 0.0, t1, epsabs=1e-14)
    eta = MetricOperator.from_matrix(np.diag([1.0, 0.25]))
    assert length == pytest.approx(geodesic_distance(eta, E1, [1, 1]), abs=1e-13)


def test_distance_stable_near_coincidence():
    eps = 1e-10
    assert geodesic_distance(None, E1, [1, eps]) == pytest.approx(eps, rel=1e-6)


def test_cos_distance_clamped():
    psi = np.array([0.3 + 0.1j, -1.7j])
    c = cos_distance(None, psi, psi * (1 + 1e-16j))
    assert 0.0 <= c <= 1.0


def test_isometry(rng):
    worst = 0.0
    for dim in (2, 3):
        for _ in range(1000):
            eta = random_pd_metric(rng, dim)
            a, b = random_state(rng, dim), random_state(rng, dim)
            lhs = geodesic_distance(eta, a, b)
            rhs = geodesic_distance(None, eta.sqrt @ a, eta.sqrt @ b)
            worst = max(worst, abs(lhs - rhs))
    assert worst <= 1e-10


def test_triangle_inequality(rng):
    for dim in (2, 3, 4):
        eta = random_pd_metric(rng, dim, floor=0.05)
        for _ in range(300):
            a, b, c = (random_state(rng, dim) for _ in range(3))
            ab, bc, ac = (geodesic_distance(eta, *p) for p in ((a, b), (b, c), (a, c)))
            assert ac <= ab + bc + 1e-12
            assert 0.0 <= ab <= math.pi / 2


@pytest.mark.parametrize("psi, dpsi, expected", [
    (E1, E1, 0.0),
    (E1, 1e-3 * E2, 1e-6),
    (np.array([1, 1]), np.array([1, -1]), 1.0),
])
def test_line_element_examples(psi, dpsi, expected):
    assert line_element_squared(None, psi, dpsi) == pytest.approx(expected, abs=1e-18)


def test_line_element_is_ray_invariant(rng):
    for _ in range(100):
        eta = random_pd_metric(rng, 3, floor=0.1)
        psi, dpsi = random_state(rng, 3), random_state(rng, 3)
        c = complex(*rng.normal(size=2))
        base = line_element_squared(eta, psi, dpsi)
        assert base >= 0
        assert line_element_squared(eta, c * psi, c * dpsi) == pytest.approx(base, rel=1e-10)
        # a radial component adds nothing
        assert line_element_squared(eta, psi, dpsi + c * psi) == pytest.approx(base, rel=1e-9, abs=1e-12)


IDENT = params_from_2x2(MetricOperator.identity(2))
QUARTER = params_from_2x2(MetricOperator.from_matrix(np.diag([1.0, 0.25])))
TWO_ONE = params_from_2x2(MetricOperator.from_matrix([[2.0, 1.0], [1.0, 2.0]]))


@pytest.mark.parametrize("params, p, d, expected", [
    (IDENT, (0.0, 0.0), (1.0, 0.0), 1.0),
    (IDENT, (1.0, 0.0), (1.0, 0.0), 0.25),
    (QUARTER, (0.0, 0.0), (1.0, 0.0), 0.25),
])
def test_chart_xy_examples(params, p, d, expected):
    assert chart_line_element_xy(params, ChartPointXY(*p), *d) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("params, p, d, expected", [
    (IDENT, (0.7, 1.1), (1.0, 0.0), 0.25),
    (IDENT, (0.0, math.pi / 2), (0.0, 1.0), 0.25),
    (TWO_ONE, (0.0, math.pi / 2), (1.0, 0.0), 1 / 12),
])
def test_chart_spherical_examples(params, p, d, expected):
    assert chart_line_element_spherical(params, ChartPointSpherical(*p), *d) == pytest.approx(expected, abs=1e-15)


def test_round_sphere_grid():
    for theta in np.linspace(0.1, 3.0, 10):
        for phi in np.linspace(0.0, 6.0, 10):
            d = (0.37, -1.3)
            got = chart_line_element_spherical(IDENT, ChartPointSpherical(phi, theta), *d)
            assert got == pytest.approx(0.25 * (d[0] ** 2 + math.sin(theta) ** 2 * d[1] ** 2), abs=1e-12)


@pytest.mark.parametrize("p, expected", [
    ((0.0, 0.0), (0.0, 0.0)),
    ((1.0, 0.0), (0.0, math.pi / 2)),
    ((0.0, 1.0), (math.pi / 2, math.pi / 2)),
])
def test_xy_to_spherical_examples(p, expected):
    assert tuple(xy_to_spherical(IDENT, ChartPointXY(*p))) == pytest.approx(expected, abs=1e-15)


def test_point_at_infinity():
    with pytest.raises(PointAtInfinity):
        spherical_to_xy(IDENT, ChartPointSpherical(0.3, math.pi))


def _random_params(rng):
    eta = random_pd_metric(rng, 2, floor=0.05)
    return eta, params_from_2x2(eta)


def test_chart_xy_matches_line_element(rng):
    # the chart point (x, y) is the ray of (1, x + iy)
    for _ in range(100):
        eta, params = _random_params(rng)
        p = ChartPointXY(*rng.normal(size=2))
        dx, dy = rng.normal(size=2)
        expected = line_element_squared(eta, chart_state(p), [0.0, complex(dx, dy)])
        assert chart_line_element_xy(params, p, dx, dy) == pytest.approx(expected, rel=1e-10)


def test_chart_xy_matches_spherical_pushforward(rng):
    for _ in range(100):
        _, params = _random_params(rng)
        p = ChartPointXY(*rng.normal(size=2))
        dx, dy = rng.normal(size=2)
        # theta = 2 atan r and phi = atan2(y, x) - beta, differentiated by hand
        r2 = p.x ** 2 + p.y ** 2
        r = math.sqrt(r2)
        dtheta = 2.0 / (1.0 + r2) * (p.x * dx + p.y * dy) / r
        dphi = (p.x * dy - p.y * dx) / r2
        lhs = chart_line_element_xy(params, p, dx, dy)
        rhs = chart_line_element_spherical(params, xy_to_spherical(params, p), dtheta, dphi)
        assert rhs == pytest.approx(lhs, rel=1e-9)


def test_chart_round_trip(rng):
    for _ in range(100):
        _, params = _random_params(rng)
        p = ChartPointXY(*rng.normal(size=2))
        back = spherical_to_xy(params, xy_to_spherical(params, p))
        assert tuple(back) == pytest.approx(tuple(p), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("H, psi, expected", [
    (np.diag([2.0, -2.0]), E1, 0.0),
    (np.diag([2.0, -2.0]), np.array([1, 1]) / math.sqrt(2), 2.0),
    (2.0 * SIGMA_Y, E1, 2.0),
])
def test_energy_uncertainty_examples(H, psi, expected):
    assert energy_uncertainty(None, H, psi) == pytest.approx(expected, abs=1e-15)


def test_energy_uncertainty_bound(rng):
    for _ in range(1000):
        dim = int(rng.integers(2, 5))
        H = random_hermitian(rng, dim)
        bound = float(np.max(np.abs(np.linalg.eigvalsh(H))))
        assert energy_uncertainty(None, H, random_state(rng, dim)) <= bound + 1e-12


def test_energy_uncertainty_rejects_negative_variance():
    eta = MetricOperator.from_matrix(np.diag([1.0, 0.25]))
    # not pseudo-Hermitian for eta; the literal formula goes negative on some states
    H = np.array([[0.0, 5.0], [-5.0, 0.0]]) * 1j + np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NegativeVariance):
        for psi in ([1, 1], [1, -1], [1, 1j], [1, -1j], [1, 2], [2, 1]):
            energy_uncertainty(eta, H, psi)


@given(st.floats(-50, 50), st.floats(0.05, 20), st.floats(0, 2 * math.pi))
@settings(max_examples=200, deadline=None)
def test_saturation_at_equal_weights(E, r, phase):
    # |c1| = |c2| gives Delta E = E for H = diag(E, -E)
    psi = r * np.array([1.0, np.exp(1j * phase)])
    assert energy_uncertainty(None, np.diag([E, -E]), psi) == pytest.approx(abs(E), abs=1e-12 * max(1, abs(E)))


@pytest.mark.parametrize("t_final", [math.pi / 4, math.pi / 2])
def test_path_length_examples(t_final):
    traj = sample_trajectory(None, SIGMA_Y, E1, t_final, steps=10_000)
    assert path_length(traj) == pytest.approx(t_final, abs=1e-8)


def test_path_length_eigenstate():
    traj = sample_trajectory(None, np.diag([1.0, -1.0]), E1, 3.0, steps=100)
    assert path_length(traj) == 0.0


def test_path_length_needs_samples():
    one = Trajectory(1.0, np.array([0.0]), np.ones((1, 2)), np.zeros(1), np.zeros(1), np.ones(1))
    with pytest.raises(TooFewSamples):
        path_length(one)
