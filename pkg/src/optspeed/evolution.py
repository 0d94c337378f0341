"""Propagation under time-independent Hamiltonians and trajectory diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from . import numerics
from .config import DEFAULT
from .errors import TooFewSamples
from .geometry import brackets, distances, energy_uncertainties, fidelities
from .metric import MetricOperator, is_pseudo_hermitian, resolve
from .states import Ray, as_state, same_dimension


@dataclass(frozen=True, eq=False)
class Trajectory:
    hbar: float
    times: np.ndarray
    states: np.ndarray          # (T, N)
    speed: np.ndarray           # projective speed, Delta E / hbar for pseudo-Hermitian H
    accumulated_s: np.ndarray
    eta_norm: np.ndarray        # <<psi|psi>> per sample
    fidelity_to_target: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.times)


def propagate(H, psi_i, t: float, hbar: float = 1.0) -> np.ndarray:
    """exp(-i t H / hbar) psi_I."""
    H = numerics.as_matrix(H)
    psi_i = as_state(psi_i)
    same_dimension(H[0], psi_i)
    return numerics.matrix_exponential((-1j * t / hbar) * H) @ psi_i


class Propagator:
    """psi(t) for many t at once, each computed from t = 0.

    When H is pseudo-Hermitian for the given metric it is diagonalized once
    through its equivalent Hermitian operator; otherwise every time point goes
    through the matrix exponential.
    """

    def __init__(self, H, metric: MetricOperator | None = None, hbar: float = 1.0):
        self.H = numerics.as_matrix(H)
        self.hbar = hbar
        self.metric = resolve(metric, self.H.shape[0])
        self.spectral = is_pseudo_hermitian(self.metric, self.H)
        if self.spectral:
            m = self.metric
            h = numerics.hermitian_part(m.sqrt @ self.H @ m.inv_sqrt)
            w, W = numerics.hermitian_eigendecomposition(h)
            self.energies = w
            self._left = m.inv_sqrt @ W
            self._right = numerics.adjoint(W) @ m.sqrt

    def states(self, psi_i, times) -> np.ndarray:
        psi_i = as_state(psi_i)
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if self.spectral:
            coeff = self._right @ psi_i
            phases = np.exp(np.outer(times, -1j * self.energies / self.hbar))
            return (phases * coeff) @ self._left.T
        return np.array([propagate(self.H, psi_i, t, self.hbar) for t in times])

    def operator(self, t: float) -> np.ndarray:
        if self.spectral:
            return (self._left * np.exp(-1j * self.energies * t / self.hbar)) @ self._right
        return numerics.matrix_exponential((-1j * t / self.hbar) * self.H)


def projective_speeds(metric: MetricOperator | None, H, states, hbar: float) -> np.ndarray:
    """sqrt of the line element of d psi/dt = -i H psi / hbar, valid for any H."""
    X = np.atleast_2d(states)
    eta = resolve(metric, X.shape[-1]).matrix
    dX = (-1j / hbar) * (X @ np.asarray(H).T)
    n = brackets(eta, X, X).real
    r = dX - (brackets(eta, X, dX) / n)[:, None] * X
    return np.sqrt(np.maximum(brackets(eta, r, r).real, 0.0) / n)


def sample_trajectory(metric: MetricOperator | None, H, psi_i, t_final: float, steps: int = 1000,
                      hbar: float = 1.0, target: Ray | None = None) -> Trajectory:
    """Sample psi(t) on a uniform grid of ``steps`` intervals over [0, t_final]."""
    if steps < 2:
        raise TooFewSamples("a trajectory needs steps >= 2")
    if not t_final > 0:
        raise TooFewSamples("t_final must be positive")
    psi_i = as_state(psi_i)
    prop = Propagator(H, metric, hbar)
    times = np.linspace(0.0, t_final, steps + 1)
    X = prop.states(psi_i, times)
    if prop.spectral:
        speed = energy_uncertainties(prop.metric, prop.H, X) / hbar
    else:
        # Delta E is not the speed of a non-quasi-unitary flow; use the line element
        speed = projective_speeds(prop.metric, prop.H, X, hbar)
    acc = cumulative_simpson(speed, x=times, initial=0.0)
    eta_norm = brackets(prop.metric.matrix, X, X).real
    fid = None
    if target is not None:
        same_dimension(psi_i, target.representative)
        fid = fidelities(prop.metric, X, target.representative)
    return Trajectory(hbar=hbar, times=times, states=X, speed=speed, accumulated_s=acc,
                      eta_norm=eta_norm, fidelity_to_target=fid)


def measured_speed(metric: MetricOperator | None, trajectory: Trajectory) -> np.ndarray:
    """Finite-difference speed from distances between sampled rays.

    Interior samples use d(psi_{k-1}, psi_{k+1}) / (t_{k+1} - t_{k-1}); the two
    end samples use the adjacent one-sided difference.
    """
    X, t = trajectory.states, trajectory.times
    if len(t) < 3:
        raise TooFewSamples("measured speed needs at least three samples")
    out = np.empty(len(t))
    out[1:-1] = distances(metric, X[:-2], X[2:]) / (t[2:] - t[:-2])
    out[0] = distances(metric, X[0], X[1])[0] / (t[1] - t[0])
    out[-1] = distances(metric, X[-2], X[-1])[0] / (t[-1] - t[-2])
    return out


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Golden-section search; purely absolute tolerance, and it keeps the ends in play."""
    best = min(((lo, f(lo)), (hi, f(hi))), key=lambda p: p[1])
    a, b = lo, hi
    c, d = b - _INV_PHI * (b - a), a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    return min(((mid, f(mid)), best), key=lambda p: p[1])


def time_to_target(metric: MetricOperator | None, H, psi_i, target: Ray, hbar: float = 1.0,
                   t_max: float = 10.0, tol: float = DEFAULT.arrival, steps: int | None = None,
                   xtol: float = 1e-12) -> float | None:
    """Arrival time at the target ray, or None if not reached by ``t_max``.

    The fidelity is scanned on a grid fine against the spectral spread of H;
    each grid-local maximum is refined by minimizing the distance to the
    target, and the first refined maximum with fidelity >= 1 - tol is the
    arrival time.
    """
    psi_i = as_state(psi_i)
    phi = as_state(target.representative)
    same_dimension(psi_i, phi)
    prop = Propagator(H, metric, hbar)
    if steps is None:
        spread = 2.0 * float(np.max(np.abs(np.linalg.eigvals(prop.H)))) / hbar
        steps = max(2000, int(math.ceil(40.0 * t_max * spread / (2.0 * math.pi))))
    times = np.linspace(0.0, t_max, steps + 1)
    X = prop.states(psi_i, times)
    fid = fidelities(prop.metric, X, phi)
    # a refined maximum can beat its grid value by at most one grid step of travel
    step = float(np.max(distances(prop.metric, X[:-1], X[1:])))
    reach = min(math.pi / 2, math.asin(min(math.sqrt(tol), 1.0)) + step)

    def dist(t: float) -> float:
        return float(distances(prop.metric, prop.states(psi_i, [t]), phi)[0])

    left = np.r_[True, fid[1:] >= fid[:-1]]
    right = np.r_[fid[:-1] >= fid[1:], True]
    for k in np.flatnonzero(left & right & (fid >= math.cos(reach) ** 2)):
        lo, hi = times[max(k - 1, 0)], times[min(k + 1, steps)]
        t_best, d_best = _golden_min(dist, lo, hi, xtol)
        if math.cos(d_best) ** 2 >= 1.0 - tol:
            return t_best
    return None
