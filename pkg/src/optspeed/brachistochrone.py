"""Optimal-speed Hamiltonians and minimum travel times.

``construct_spectral`` is the reference construction. The closed forms are
kept as independent cross-checks; their printed normalization gives
eigenvalues +-E/4, so they take a ``prefactor_scale`` that defaults to 4.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AntipodalChartPoint, AntipodalRays, CoincidentRays, SchemaError
from .geometry import cos_distance, geodesic_distance
from .metric import MetricOperator, MetricParams2x2, resolve
from .states import as_state, canonical_vector, same_dimension

# s below this counts as "same ray"; |<u, f>| below this as antipodal
COINCIDENT_TOL = 1e-12
ANTIPODAL_TOL = 1e-14
DEFAULT_PREFACTOR_SCALE = 4.0


@dataclass(frozen=True)
class EnergyScale:
    E: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.E > 0 and self.hbar > 0) or not (math.isfinite(self.E) and math.isfinite(self.hbar)):
            raise SchemaError(f"energy and hbar must be positive and finite (E={self.E}, hbar={self.hbar})")


@dataclass(frozen=True, eq=False)
class BrachistochroneResult:
    hamiltonian: np.ndarray
    tau_min: float
    s: float
    xi: complex
    omega: float
    antipodal: bool
    scale: EnergyScale
    # eta-orthonormal eigenvectors for -E and +E, as columns
    eigenvectors: np.ndarray = field(repr=False)
    # eta-orthonormal basis of the span: u along psi_I, v the geodesic direction
    basis: np.ndarray = field(repr=False)


def _eta_normalize(eta: np.ndarray, v: np.ndarray) -> np.ndarray:
    return v / math.sqrt(np.vdot(v, eta @ v).real)


def _xi(eta: np.ndarray, psi_i: np.ndarray, psi_f: np.ndarray, u: np.ndarray, f: np.ndarray) -> complex:
    """<psi_I, psi_F>_eta in the chart normalization psi_I = e1, psi_F = (zeta, 1) when it applies."""
    if len(psi_i) == 2 and psi_i[1] == 0 and psi_f[1] != 0:
        return complex(np.vdot(np.array([1.0, 0.0]), eta @ (psi_f / psi_f[1])))
    return complex(np.vdot(u, eta @ f))


def construct_spectral(metric: MetricOperator | None, psi_i, psi_f,
                       scale: EnergyScale = EnergyScale()) -> BrachistochroneResult:
    """H = E(-|psi_1><<psi_1| + |psi_2><<psi_2|) with eta-orthonormal eigenvectors.

    The eigenvectors are (u -+ i v)/sqrt(2), where u is psi_I normalized and v is
    the unit tangent of the geodesic towards psi_F, so that psi_I has equal
    weight on both and exp(-i t H / hbar) u = cos(Et/hbar) u + sin(Et/hbar) v.
    Dimensions above two are handled on the span of the two states; H vanishes on
    its eta-orthogonal complement.
    """
    psi_i, psi_f = as_state(psi_i), as_state(psi_f)
    same_dimension(psi_i, psi_f)
    eta = resolve(metric, len(psi_i)).matrix
    E, hbar = scale.E, scale.hbar

    u = _eta_normalize(eta, psi_i)
    f = _eta_normalize(eta, psi_f)
    overlap = np.vdot(u, eta @ f)
    antipodal = abs(overlap) <= ANTIPODAL_TOL
    if antipodal:
        # every relative phase gives an equally short geodesic; fix one gauge-free
        # choice: u canonical, f with its last nonzero component real positive
        u = _eta_normalize(eta, canonical_vector(psi_i))
        last = f[np.flatnonzero(np.abs(f) > 1e-12)[-1]]
        f = f * (abs(last) / last)
        overlap = 0.0
    else:
        f = f * (np.conj(overlap) / abs(overlap))

    cos_s = abs(overlap)
    rejection = f - cos_s * u
    sin_s = math.sqrt(max(np.vdot(rejection, eta @ rejection).real, 0.0))
    s = math.atan2(sin_s, cos_s)
    if s <= COINCIDENT_TOL:
        raise CoincidentRays("initial and final states lie on the same ray")
    v = rejection / sin_s

    bra_u = np.conj(u) @ eta
    bra_v = np.conj(v) @ eta
    H = 1j * E * (np.outer(v, bra_u) - np.outer(u, bra_v))

    psi_minus = (u - 1j * v) / math.sqrt(2.0)
    psi_plus = (u + 1j * v) / math.sqrt(2.0)
    vecs = np.column_stack([psi_minus, psi_plus])
    # phase convention: <<psi_n|psi_I>> real positive
    weights = np.conj(vecs).T @ (eta @ psi_i)
    vecs = vecs * (np.abs(weights) / weights)

    xi = 0j if antipodal else _xi(eta, psi_i, psi_f, u, f)
    omega = cmath.phase(xi) if xi != 0 else 0.0
    return BrachistochroneResult(hamiltonian=H, tau_min=hbar * s / E, s=s, xi=xi, omega=omega,
                                 antipodal=bool(antipodal), scale=scale, eigenvectors=vecs,
                                 basis=np.column_stack([u, v]))


def construct_closed_form(metric: MetricOperator | None, psi_i, psi_f,
                          scale: EnergyScale = EnergyScale(),
                          prefactor_scale: float = DEFAULT_PREFACTOR_SCALE) -> np.ndarray:
    """prefactor_scale * (iE cot(s)/4) (|F><<I| / <<I|F>> - |I><<F| / <<F|I>>)."""
    psi_i, psi_f = as_state(psi_i), as_state(psi_f)
    same_dimension(psi_i, psi_f)
    eta = resolve(metric, len(psi_i)).matrix
    s = geodesic_distance(metric, psi_i, psi_f)
    if s <= COINCIDENT_TOL:
        raise CoincidentRays("initial and final states lie on the same ray")
    if cos_distance(metric, psi_i, psi_f) <= ANTIPODAL_TOL:
        raise AntipodalRays("closed form divides by <psi_I, psi_F>, which vanishes for antipodal rays")
    bra_i = np.conj(psi_i) @ eta
    bra_f = np.conj(psi_f) @ eta
    if_ = bra_i @ psi_f
    fi = bra_f @ psi_i
    core = np.outer(psi_f, bra_i) / if_ - np.outer(psi_i, bra_f) / fi
    return prefactor_scale * (1j * scale.E / (4.0 * math.tan(s))) * core


def explicit_tau_2x2(params: MetricParams2x2, zeta: complex, scale: EnergyScale = EnergyScale()) -> float:
    """(hbar/E) arccos(|xi| / sqrt(D + |xi|^2)) for psi_I = e1, psi_F = (zeta, 1)."""
    xi = params.a * complex(zeta) + params.b.conjugate()
    # atan2(sqrt(D), |xi|) is the same angle without arccos' loss near |xi| >> D
    return scale.hbar / scale.E * math.atan2(math.sqrt(params.D), abs(xi))


def construct_explicit_2x2(params: MetricParams2x2, zeta: complex, scale: EnergyScale = EnergyScale(),
                           prefactor_scale: float = DEFAULT_PREFACTOR_SCALE,
                           omega: float | None = None) -> tuple[np.ndarray, float]:
    """Matrix of the optimal eta-pseudo-Hermitian Hamiltonian in the basis {e1, e2}.

    ``omega`` overrides arg(xi); it is required when xi = 0.
    """
    a, D = params.a, params.D
    bc = params.b.conjugate()
    xi = a * complex(zeta) + bc
    tau = explicit_tau_2x2(params, zeta, scale)
    if omega is None:
        if xi == 0:
            raise AntipodalChartPoint("xi = 0: the chart point is antipodal to e1 and arg(xi) is undefined")
        omega = cmath.phase(xi)
    e_w = cmath.exp(1j * omega)
    core = np.array([[-a * bc, -(D * e_w ** 2 + bc ** 2)],
                     [a * a, a * bc]], dtype=complex)
    H = prefactor_scale * (1j * scale.E / e_w / (4.0 * a * math.sqrt(D))) * core
    return H, tau


def tau_min(metric: MetricOperator | None, psi_i, psi_f, scale: EnergyScale = EnergyScale()) -> float:
    return scale.hbar * geodesic_distance(metric, psi_i, psi_f) / scale.E
