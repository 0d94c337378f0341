"""Fubini-Study geometry of the projective space, for the standard or an eta-deformed inner product.

Every function takes a metric operator; ``None`` means the identity, which
gives back the usual formulas.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.integrate import simpson

from .config import DEFAULT
from .errors import NegativeVariance, PointAtInfinity, TooFewSamples, ZeroVector
from .metric import MetricOperator, MetricParams2x2, resolve
from .states import as_state, same_dimension

TWO_PI = 2.0 * math.pi


class ChartPointXY(NamedTuple):
    x: float
    y: float


class ChartPointSpherical(NamedTuple):
    phi: float
    theta: float


def brackets(eta: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise <x_t | eta y_t> for stacked states (T x N)."""
    return np.sum(np.conj(X) * (Y @ eta.T), axis=-1)


def _eta(metric: MetricOperator | None, dim: int) -> np.ndarray:
    return resolve(metric, dim).matrix


def distances(metric: MetricOperator | None, A, B) -> np.ndarray:
    """Geodesic distance between corresponding rows of A and B.

    Evaluated as atan2(|rejection|, |overlap|) rather than arccos(|overlap|):
    the two agree, but arccos loses half the digits for nearby rays.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    eta = _eta(metric, A.shape[-1])
    na = np.sqrt(brackets(eta, A, A).real)
    nb = np.sqrt(brackets(eta, B, B).real)
    if np.any(na <= 0) or np.any(nb <= 0):
        raise ZeroVector("state vector is zero")
    a = A / na[:, None]
    b = B / nb[:, None]
    overlap = brackets(eta, a, b)
    r = b - overlap[:, None] * a
    sin_s = np.sqrt(np.maximum(brackets(eta, r, r).real, 0.0))
    return np.arctan2(sin_s, np.abs(overlap))


def geodesic_distance(metric: MetricOperator | None, psi_i, psi_f) -> float:
    psi_i, psi_f = as_state(psi_i), as_state(psi_f)
    same_dimension(psi_i, psi_f)
    return float(distances(metric, psi_i, psi_f)[0])


def cos_distance(metric: MetricOperator | None, psi_i, psi_f) -> float:
    """|<psi_I, psi_F>_eta| / sqrt(<psi_I, psi_I>_eta <psi_F, psi_F>_eta), clamped to [0, 1]."""
    psi_i, psi_f = as_state(psi_i), as_state(psi_f)
    same_dimension(psi_i, psi_f)
    eta = _eta(metric, len(psi_i))
    num = abs(np.vdot(psi_i, eta @ psi_f))
    den = math.sqrt(np.vdot(psi_i, eta @ psi_i).real * np.vdot(psi_f, eta @ psi_f).real)
    return min(max(num / den, 0.0), 1.0)


def fidelities(metric: MetricOperator | None, states, target) -> np.ndarray:
    """eta-projector overlap of each row with the target ray."""
    X = np.atleast_2d(np.asarray(states, dtype=complex))
    t = np.asarray(target, dtype=complex)
    eta = _eta(metric, X.shape[-1])
    ov = np.conj(t) @ (eta @ X.T)
    return np.abs(ov) ** 2 / (brackets(eta, X, X).real * np.vdot(t, eta @ t).real)


def line_element_squared(metric: MetricOperator | None, psi, dpsi) -> float:
    """(<psi|psi><dpsi|dpsi> - |<psi|dpsi>|^2) / <psi|psi>^2 in the eta inner product."""
    psi = as_state(psi)
    dpsi = np.asarray(dpsi, dtype=complex)
    same_dimension(psi, dpsi)
    eta = _eta(metric, len(psi))
    nn = np.vdot(psi, eta @ psi).real
    # same quantity as the Cauchy-Schwarz defect, written as the squared norm of
    # the component of dpsi orthogonal to psi so it cannot go negative
    r = dpsi - (np.vdot(psi, eta @ dpsi) / nn) * psi
    return float(np.vdot(r, eta @ r).real / nn)


def chart_line_element_xy(params: MetricParams2x2, p: ChartPointXY, dx: float, dy: float) -> float:
    x, y = p
    den = params.a + 2.0 * (params.b1 * x + params.b2 * y) + params.c * (x * x + y * y)
    return params.D * (dx * dx + dy * dy) / den ** 2


def chart_line_element_spherical(params: MetricParams2x2, p: ChartPointSpherical,
                                 dtheta: float, dphi: float) -> float:
    phi, theta = p
    st = math.sin(theta)
    den = 1.0 + params.k2 * math.cos(theta) + params.k3 * math.cos(phi) * st
    return params.k1 * (dtheta ** 2 + st * st * dphi ** 2) / den ** 2


def xy_to_spherical(params: MetricParams2x2, p: ChartPointXY) -> ChartPointSpherical:
    x, y = p
    r = math.hypot(x, y)
    theta = 2.0 * math.atan(r)
    if r == 0.0:
        return ChartPointSpherical(0.0, 0.0)
    phi = (math.atan2(y, x) - params.beta) % TWO_PI
    return ChartPointSpherical(phi, theta)


def spherical_to_xy(params: MetricParams2x2, p: ChartPointSpherical) -> ChartPointXY:
    phi, theta = p
    if math.isclose(theta, math.pi, rel_tol=0.0, abs_tol=1e-15):
        raise PointAtInfinity("theta = pi is the ray of e2, the point at infinity of the x-y chart")
    r = math.tan(theta / 2.0)
    return ChartPointXY(r * math.cos(phi + params.beta), r * math.sin(phi + params.beta))


def chart_state(p: ChartPointXY) -> np.ndarray:
    return np.array([1.0, complex(p.x, p.y)])


def energy_uncertainties(metric: MetricOperator | None, H, states,
                         floor: float = DEFAULT.variance_floor) -> np.ndarray:
    X = np.atleast_2d(np.asarray(states, dtype=complex))
    H = np.asarray(H, dtype=complex)
    eta = _eta(metric, X.shape[-1])
    HX = X @ H.T
    n = brackets(eta, X, X).real
    h1 = brackets(eta, X, HX)
    h2 = brackets(eta, X, HX @ H.T).real
    var = h2 / n - np.abs(h1) ** 2 / n ** 2
    scale = np.maximum(1.0, np.abs(h2 / n))
    bad = var < -floor * scale
    if np.any(bad):
        raise NegativeVariance(
            f"energy variance {var[bad][0]:.3e} is negative; H is not pseudo-Hermitian in this metric")
    return np.sqrt(np.maximum(var, 0.0))


def energy_uncertainty(metric: MetricOperator | None, H, psi,
                       floor: float = DEFAULT.variance_floor) -> float:
    psi = as_state(psi)
    return float(energy_uncertainties(metric, H, psi, floor)[0])


def path_length(trajectory) -> float:
    """Length of the traced curve: Simpson's rule over the stored speed samples.

    The trajectory's speeds are already divided by hbar and were measured in
    the trajectory's own metric.
    """
    times = np.asarray(trajectory.times, dtype=float)
    speed = np.asarray(trajectory.speed, dtype=float)
    if len(times) < 2:
        raise TooFewSamples("path length needs at least two samples")
    if np.any(np.diff(times) <= 0):
        raise TooFewSamples("sample times must be strictly increasing")
    return float(simpson(speed, x=times))
