"""Residual battery checking a constructed (or supplied) optimal Hamiltonian by simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .brachistochrone import (BrachistochroneResult, EnergyScale, construct_closed_form,
                              construct_spectral)
from .config import DEFAULT, Tolerances
from .errors import OptSpeedError
from .evolution import Propagator, measured_speed, sample_trajectory
from .geometry import fidelities, geodesic_distance, path_length
from .metric import MetricOperator, equivalent_hermitian, pseudo_hermiticity_defect, resolve
from .states import Ray, as_state


@dataclass
class Check:
    name: str
    value: float | None
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def residuals(self) -> dict[str, float | None]:
        return {c.name: c.value for c in self.checks}

    def as_dict(self) -> dict:
        first = self.first_failure
        return {"passed": self.passed, "first_failure": first.name if first else None,
                "checks": [c.as_dict() for c in self.checks]}


def _run(report: Report, name: str, tolerance: float, fn, upper: bool = True) -> None:
    """Record fn()'s residual; ``upper`` means the residual must not exceed the tolerance."""
    try:
        value = float(fn())
    except (OptSpeedError, ValueError, np.linalg.LinAlgError) as exc:
        report.checks.append(Check(name, None, tolerance, False, f"{type(exc).__name__}: {exc}"))
        return
    ok = value <= tolerance if upper else value >= tolerance
    report.checks.append(Check(name, value, tolerance, bool(ok and math.isfinite(value))))


def spectrum_residual(H: np.ndarray, E: float) -> float:
    """Distance of the spectrum from {-E, 0, ..., 0, +E}, relative to E."""
    w = np.linalg.eigvals(H)
    w = w[np.argsort(w.real)]
    expected = np.zeros(len(w))
    expected[0], expected[-1] = -E, E
    return float(np.max(np.abs(w - expected)) / E)


def arrival_fidelity(metric: MetricOperator | None, H, psi_i, psi_f, t: float, hbar: float) -> float:
    prop = Propagator(H, metric, hbar)
    psi_t = prop.operator(t) @ as_state(psi_i)
    return float(fidelities(prop.metric, psi_t, as_state(psi_f))[0])


def run_battery(metric: MetricOperator | None, psi_i, psi_f, scale: EnergyScale = EnergyScale(),
                steps: int = 10_000, tol: Tolerances = DEFAULT,
                hamiltonian=None) -> tuple[BrachistochroneResult, Report]:
    """Construct the optimal Hamiltonian and check every property it should have.

    If ``hamiltonian`` is given it is checked in place of the constructed one
    (travel time and distance still come from the states).
    """
    psi_i, psi_f = as_state(psi_i), as_state(psi_f)
    eta = resolve(metric, len(psi_i))
    result = construct_spectral(eta, psi_i, psi_f, scale)
    H = result.hamiltonian if hamiltonian is None else numerics.as_matrix(hamiltonian, len(psi_i))
    E, hbar, tau, s = scale.E, scale.hbar, result.tau_min, result.s
    report = Report()

    _run(report, "pseudo_hermiticity", tol.pseudo_hermitian, lambda: pseudo_hermiticity_defect(eta, H))
    _run(report, "spectrum", tol.spectrum, lambda: spectrum_residual(H, E))
    _run(report, "trace", tol.spectrum, lambda: abs(np.trace(H)) / E)
    _run(report, "arrival", tol.arrival,
         lambda: 1.0 - arrival_fidelity(eta, H, psi_i, psi_f, tau, hbar))

    traj = None

    def trajectory():
        nonlocal traj
        if traj is None:
            traj = sample_trajectory(eta, H, psi_i, tau, steps, hbar, Ray(psi_f))
        return traj

    _run(report, "constant_speed", tol.spectrum,
         lambda: float(np.max(np.abs(trajectory().speed * hbar / E - 1.0))))
    _run(report, "measured_speed", tol.speed,
         lambda: float(np.max(np.abs(measured_speed(eta, trajectory()) * hbar / E - 1.0))))
    _run(report, "path_length", tol.path_length, lambda: abs(path_length(trajectory()) - s))
    _run(report, "eta_norm_drift", tol.norm_drift,
         lambda: float(np.ptp(trajectory().eta_norm) / np.mean(trajectory().eta_norm)))

    def quasi_unitarity():
        U = Propagator(H, eta, hbar).operator(tau)
        return numerics.norm(numerics.adjoint(U) @ eta.matrix @ U - eta.matrix) / numerics.norm(eta.matrix)

    _run(report, "quasi_unitarity", tol.norm_drift, quasi_unitarity)

    if not result.antipodal:
        _run(report, "closed_form_x4", tol.closed_form,
             lambda: numerics.norm(construct_closed_form(eta, psi_i, psi_f, scale) - H) / numerics.norm(H))

    _run(report, "isometry", tol.isometry,
         lambda: abs(geodesic_distance(eta, psi_i, psi_f)
                     - geodesic_distance(None, eta.sqrt @ psi_i, eta.sqrt @ psi_f)))

    def equivalent_picture():
        h = equivalent_hermitian(eta, H, tol.pseudo_hermitian)
        return 1.0 - arrival_fidelity(None, h, eta.sqrt @ psi_i, eta.sqrt @ psi_f, tau, hbar)

    _run(report, "equivalent_hermitian_arrival", tol.arrival, equivalent_picture)
    return result, report


def quick_residuals(metric: MetricOperator | None, psi_i, psi_f, result: BrachistochroneResult,
                    tol: Tolerances = DEFAULT) -> Report:
    """The cheap subset embedded in construct output: spectrum, trace, pseudo-Hermiticity, arrival."""
    H, E, hbar = result.hamiltonian, result.scale.E, result.scale.hbar
    report = Report()
    _run(report, "pseudo_hermiticity", tol.pseudo_hermitian, lambda: pseudo_hermiticity_defect(metric, H))
    _run(report, "spectrum", tol.spectrum, lambda: spectrum_residual(H, E))
    _run(report, "trace", tol.spectrum, lambda: abs(np.trace(H)) / E)
    _run(report, "arrival", tol.arrival,
         lambda: 1.0 - arrival_fidelity(metric, H, psi_i, psi_f, result.tau_min, hbar))
    return report


def random_ray_pair(rng: np.random.Generator, dim: int = 2) -> tuple[np.ndarray, np.ndarray]:
    def draw():
        return rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return draw(), draw()


def run_random_suite(seed: int, cases: int, dim: int = 2, random_metric: bool = True,
                     tol: Tolerances = DEFAULT) -> Report:
    """Seeded sweep over random metrics, ray pairs and energies (arrival, spectrum, pseudo-Hermiticity)."""
    from .metric import random_metric as draw_metric

    rng = np.random.default_rng(seed)
    worst = {"arrival": 0.0, "spectrum": 0.0, "pseudo_hermiticity": 0.0}
    for _ in range(cases):
        eta = draw_metric(rng, dim) if random_metric else None
        psi_i, psi_f = random_ray_pair(rng, dim)
        scale = EnergyScale(E=float(10 ** rng.uniform(-1, 1)))
        res = construct_spectral(eta, psi_i, psi_f, scale)
        H = res.hamiltonian
        worst["arrival"] = max(worst["arrival"],
                               1.0 - arrival_fidelity(eta, H, psi_i, psi_f, res.tau_min, scale.hbar))
        worst["spectrum"] = max(worst["spectrum"], spectrum_residual(H, scale.E))
        worst["pseudo_hermiticity"] = max(worst["pseudo_hermiticity"], pseudo_hermiticity_defect(eta, H))
    if random_metric:
        # ill-conditioned metrics cost digits; these are the pseudo-Hermitian acceptance levels
        limits = dict.fromkeys(worst, tol.pseudo_hermitian)
    else:
        limits = {"arrival": tol.arrival, "spectrum": tol.spectrum, "pseudo_hermiticity": tol.spectrum}
    return Report([Check(f"random_{k}", v, limits[k], v <= limits[k], f"{cases} cases, seed {seed}")
                   for k, v in worst.items()])


SWEEP_HEADER = ["c", "D", "abs_xi", "tau_min", "s", "tau_min_standard",
                "measured_speed_min", "measured_speed_max"]


def metric_sweep(zeta: complex, a: float, b: complex, cs, scale: EnergyScale = EnergyScale(),
                 steps: int = 1000) -> list[list[float]]:
    """One row per c for eta = [[a, b*], [b, c]], psi_I = e1, psi_F = (zeta, 1).

    The measured speed is the finite-difference eta-distance rate along the
    optimal trajectory; it should sit at E/hbar whatever c is.
    """
    from .brachistochrone import explicit_tau_2x2
    from .metric import metric_from_params, params_from_2x2

    psi_i = np.array([1.0, 0.0], dtype=complex)
    psi_f = np.array([complex(zeta), 1.0])
    tau_standard = explicit_tau_2x2(params_from_2x2(metric_from_params(1.0, 1.0)), zeta, scale)
    rows = []
    for c in cs:
        eta = metric_from_params(a, c, b)
        params = params_from_2x2(eta)
        res = construct_spectral(eta, psi_i, psi_f, scale)
        traj = sample_trajectory(eta, res.hamiltonian, psi_i, res.tau_min, steps, scale.hbar)
        speed = measured_speed(eta, traj)
        xi = params.a * complex(zeta) + params.b.conjugate()
        rows.append([float(c), params.D, abs(xi), explicit_tau_2x2(params, zeta, scale), res.s,
                     tau_standard, float(speed.min()), float(speed.max())])
    return rows
