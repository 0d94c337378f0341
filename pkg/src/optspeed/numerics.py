"""Dense complex linear algebra for small matrices.

Hermitian eigenproblems are solved with cyclic Jacobi rotations (one
closed-form rotation for 2x2), so results do not depend on which LAPACK
driver numpy happens to link against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT
from .errors import NonHermitianInput, NotPositiveDefinite, SchemaError

_EPS = np.finfo(float).eps
# couplings below this are treated as exact zeros (their phase is not computable)
_TINY = 1e-290


class EigenSystem(NamedTuple):
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # columns, orthonormal


@dataclass(frozen=True)
class PDCheck:
    positive_definite: bool
    min_eigenvalue: float
    max_eigenvalue: float

    def __bool__(self) -> bool:
        return self.positive_definite


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise SchemaError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise SchemaError(f"expected a {dim}x{dim} matrix, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SchemaError("matrix has non-finite entries")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + adjoint(m))


def norm(m: np.ndarray) -> float:
    """Frobenius norm; the reference scale for every relative tolerance here."""
    return float(np.linalg.norm(m))


def hermiticity_defect(m: np.ndarray) -> float:
    scale = norm(m)
    return norm(m - adjoint(m)) / scale if scale > 0 else 0.0


def is_hermitian(m: np.ndarray, tol: float = DEFAULT.rel) -> bool:
    return hermiticity_defect(m) <= tol


def _require_hermitian(m: np.ndarray, tol: float) -> None:
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitianInput(f"matrix is not Hermitian: relative defect {defect:.3e} > {tol:.1e}")


def _rotation(alpha: float, gamma: float, beta: complex):
    """Unitary 2x2 G with G^dagger [[alpha, beta], [beta*, gamma]] G diagonal.

    The block factors as P R P^dagger with P = diag(1, e^{-i phi}) and R real
    symmetric, so G = P Q where Q is the classic real Jacobi rotation.
    """
    mag = abs(beta)
    phase = beta / mag
    tau = (gamma - alpha) / (2.0 * mag)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    pc = np.conj(phase)
    return np.array([[c, s], [-s * pc, c * pc]], dtype=complex)


def _eigh_2x2(m: np.ndarray):
    alpha, gamma, beta = m[0, 0].real, m[1, 1].real, m[0, 1]
    if abs(beta) <= _TINY * max(abs(alpha), abs(gamma), 1.0):
        return np.array([alpha, gamma]), np.eye(2, dtype=complex)
    mean = 0.5 * (alpha + gamma)
    radius = math.hypot(0.5 * (alpha - gamma), abs(beta))
    g = _rotation(alpha, gamma, beta)
    d = adjoint(g) @ m @ g
    # the rotation orders the pair; take the closed-form values in that order
    if d[0, 0].real <= d[1, 1].real:
        return np.array([mean - radius, mean + radius]), g
    return np.array([mean + radius, mean - radius]), g


def _jacobi(m: np.ndarray, max_sweeps: int = 64):
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = norm(a)
    if scale == 0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = norm(a - np.diag(np.diag(a)))
        if off <= _EPS * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= max(1e-3 * _EPS * scale, _TINY):
                    continue
                g = _rotation(a[p, p].real, a[q, q].real, a[p, q])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = adjoint(g) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    return np.diag(a).real.copy(), v


def hermitian_eigendecomposition(m, tol: float = DEFAULT.rel) -> EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    m = as_matrix(m)
    _require_hermitian(m, tol)
    m = hermitian_part(m)
    if m.shape[0] == 1:
        return EigenSystem(np.array([m[0, 0].real]), np.ones((1, 1), dtype=complex))
    if m.shape[0] == 2:
        w, v = _eigh_2x2(m)
    else:
        w, v = _jacobi(m)
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], v[:, order])


def is_positive_definite(m, tol: float = DEFAULT.rel) -> PDCheck:
    w, _ = hermitian_eigendecomposition(m, tol)
    floor = tol * max(float(np.max(np.abs(w))), 1.0)
    return PDCheck(bool(w[0] > floor), float(w[0]), float(w[-1]))


def principal_sqrt_pd(m, tol: float = DEFAULT.rel) -> np.ndarray:
    """Hermitian positive-definite R with R @ R == m."""
    w, v = hermitian_eigendecomposition(m, tol)
    if w[0] <= tol * abs(w[-1]):
        raise NotPositiveDefinite(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return hermitian_part((v * np.sqrt(w)) @ adjoint(v))


def inverse_sqrt_pd(m, tol: float = DEFAULT.rel) -> np.ndarray:
    w, v = hermitian_eigendecomposition(m, tol)
    if w[0] <= tol * abs(w[-1]):
        raise NotPositiveDefinite(f"matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return hermitian_part((v / np.sqrt(w)) @ adjoint(v))


def _sinhc(q: complex) -> complex:
    if abs(q) < 1e-4:
        q2 = q * q
        return 1.0 + q2 / 6.0 + q2 * q2 / 120.0
    return np.sinh(q) / q


def _expm_2x2(m: np.ndarray) -> np.ndarray:
    # m = (tr/2) I + m0 with m0 traceless, so m0 @ m0 = q^2 I
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    m0 = m - half_tr * np.eye(2)
    q = np.sqrt(complex(m0[0, 0] * m0[0, 0] + m0[0, 1] * m0[1, 0]))
    return np.exp(half_tr) * (np.cosh(q) * np.eye(2) + _sinhc(q) * m0)


def _expm_taylor(m: np.ndarray, terms: int = 20) -> np.ndarray:
    n1 = float(np.max(np.sum(np.abs(m), axis=0)))
    squarings = max(0, math.ceil(math.log2(n1 / 0.5))) if n1 > 0.5 else 0
    x = m / 2.0 ** squarings
    result = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ x / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def matrix_exponential(m) -> np.ndarray:
    m = as_matrix(m)
    if is_hermitian(m):
        w, v = hermitian_eigendecomposition(m)
        return (v * np.exp(w)) @ adjoint(v)
    if is_hermitian(1j * m):
        w, v = hermitian_eigendecomposition(1j * m)
        return (v * np.exp(-1j * w)) @ adjoint(v)
    if m.shape[0] == 2:
        return _expm_2x2(m)
    return _expm_taylor(m)
