"""Positive-definite metric operators and the pseudo-Hermitian toolkit built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .config import DEFAULT
from .errors import DimensionMismatch, NotPositiveDefinite, NotPseudoHermitian, SingularMatrix
from .numerics import adjoint, norm


@dataclass(frozen=True, eq=False)
class MetricOperator:
    """eta_+ together with its cached square root, inverse square root and inverse."""

    matrix: np.ndarray
    sqrt: np.ndarray
    inv_sqrt: np.ndarray
    inverse: np.ndarray

    @classmethod
    def from_matrix(cls, m, tol: float = DEFAULT.rel) -> "MetricOperator":
        m = numerics.as_matrix(m)
        check = numerics.is_positive_definite(m, tol)
        if not check:
            raise NotPositiveDefinite(
                f"metric is not positive definite (min eigenvalue {check.min_eigenvalue:.6g})")
        m = numerics.hermitian_part(m)
        w, v = numerics.hermitian_eigendecomposition(m, tol)
        root = numerics.hermitian_part((v * np.sqrt(w)) @ adjoint(v))
        inv_root = numerics.hermitian_part((v / np.sqrt(w)) @ adjoint(v))
        inv = numerics.hermitian_part((v / w) @ adjoint(v))
        for arr in (m, root, inv_root, inv):
            arr.setflags(write=False)
        return cls(m, root, inv_root, inv)

    @classmethod
    def identity(cls, dim: int) -> "MetricOperator":
        if dim not in _IDENTITIES:
            _IDENTITIES[dim] = cls.from_matrix(np.eye(dim))
        return _IDENTITIES[dim]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim)))


_IDENTITIES: dict[int, MetricOperator] = {}


def resolve(metric: MetricOperator | None, dim: int) -> MetricOperator:
    """The identity metric stands in for ``None``."""
    if metric is None:
        return MetricOperator.identity(dim)
    if metric.dim != dim:
        raise DimensionMismatch(f"metric is {metric.dim}x{metric.dim} but states have dimension {dim}")
    return metric


def metric_from_params(a: float, c: float, b: complex = 0.0) -> MetricOperator:
    """eta = [[a, conj(b)], [b, c]]."""
    b = complex(b)
    d = a * c - abs(b) ** 2
    if not (a + c > 0 and d > 0):
        raise NotPositiveDefinite(f"metric parameters violate a+c>0, D>0 (a+c={a + c:.6g}, D={d:.6g})")
    return MetricOperator.from_matrix(np.array([[a, b.conjugate()], [b, c]], dtype=complex))


def pseudo_inner(metric: MetricOperator | None, phi, psi) -> complex:
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != psi.shape:
        raise DimensionMismatch(f"dimension mismatch: {phi.shape} vs {psi.shape}")
    if metric is None:
        return complex(np.vdot(phi, psi))
    metric = resolve(metric, len(psi))
    return complex(np.vdot(phi, metric.matrix @ psi))


@dataclass(frozen=True)
class MetricParams2x2:
    a: float
    c: float
    b: complex
    D: float
    k1: float
    k2: float
    k3: float
    beta: float

    @property
    def b1(self) -> float:
        return self.b.real

    @property
    def b2(self) -> float:
        return self.b.imag

    @classmethod
    def from_abc(cls, a: float, c: float, b: complex = 0.0) -> "MetricParams2x2":
        return params_from_2x2(metric_from_params(a, c, b))

    def as_dict(self) -> dict:
        return {"a": self.a, "c": self.c, "b": [self.b1, self.b2], "D": self.D,
                "k1": self.k1, "k2": self.k2, "k3": self.k3, "beta": self.beta}


def params_from_2x2(metric: MetricOperator) -> MetricParams2x2:
    if metric.dim != 2:
        raise DimensionMismatch(f"2x2 parametrization needs a 2x2 metric, got {metric.dim}x{metric.dim}")
    m = metric.matrix
    a, c, b = float(m[0, 0].real), float(m[1, 1].real), complex(m[1, 0])
    d = a * c - abs(b) ** 2
    if d <= 0 or a + c <= 0:
        raise NotPositiveDefinite(f"D = ac - |b|^2 = {d:.6g} is not positive")
    tr = a + c
    beta = math.atan2(b.imag, b.real) if b != 0 else 0.0
    return MetricParams2x2(a=a, c=c, b=b, D=d, k1=d / tr ** 2, k2=(a - c) / tr,
                           k3=2.0 * abs(b) / tr, beta=beta)


def pseudo_adjoint(metric: MetricOperator, A) -> np.ndarray:
    """A# = eta^-1 A^dagger eta."""
    A = numerics.as_matrix(A)
    metric = resolve(metric, A.shape[0])
    return metric.inverse @ adjoint(A) @ metric.matrix


def pseudo_hermiticity_defect(metric: MetricOperator | None, H) -> float:
    """||H^dagger - eta H eta^-1|| / ||H||."""
    H = numerics.as_matrix(H)
    metric = resolve(metric, H.shape[0])
    scale = norm(H)
    if scale == 0:
        return 0.0
    # eta H eta^-1 in double precision carries an error of order eps * cond(eta)
    # that is not in H; evaluate it in extended precision with a refined inverse
    eta = metric.matrix.astype(np.clongdouble)
    inv = metric.inverse.astype(np.clongdouble)
    eye = np.eye(len(eta), dtype=np.clongdouble)
    for _ in range(2):
        inv = inv @ (2 * eye - eta @ inv)
    diff = adjoint(H).astype(np.clongdouble) - eta @ H.astype(np.clongdouble) @ inv
    return float(np.sqrt(np.sum(np.abs(diff) ** 2))) / scale


def is_pseudo_hermitian(metric: MetricOperator | None, H, tol: float = DEFAULT.pseudo_hermitian) -> bool:
    return pseudo_hermiticity_defect(metric, H) <= tol


def is_quasi_unitary(metric: MetricOperator | None, U, tol: float = 1e-10) -> bool:
    """True iff U^dagger eta U == eta, i.e. U^-1 = eta^-1 U^dagger eta."""
    U = numerics.as_matrix(U)
    metric = resolve(metric, U.shape[0])
    if np.linalg.cond(U) > 1.0 / np.finfo(float).eps:
        raise SingularMatrix("operator is singular")
    eta = metric.matrix
    return norm(adjoint(U) @ eta @ U - eta) <= tol * norm(eta)


def equivalent_hermitian(metric: MetricOperator | None, H,
                         tol: float = DEFAULT.pseudo_hermitian) -> np.ndarray:
    """h = eta^{1/2} H eta^{-1/2}."""
    H = numerics.as_matrix(H)
    metric = resolve(metric, H.shape[0])
    defect = pseudo_hermiticity_defect(metric, H)
    if defect > tol:
        raise NotPseudoHermitian(f"operator is not eta-pseudo-Hermitian (relative defect {defect:.3e})")
    return numerics.hermitian_part(metric.sqrt @ H @ metric.inv_sqrt)


def random_metric(rng: np.random.Generator, dim: int, floor: float = 1e-6) -> MetricOperator:
    """A^dagger A + floor*I with A complex Gaussian."""
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return MetricOperator.from_matrix(numerics.hermitian_part(adjoint(A) @ A) + floor * np.eye(dim))

