"""State vectors, rays and rank-one projectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SchemaError, ZeroVector

_ZERO = 1e-12


def as_state(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1 or v.size < 2:
        raise SchemaError(f"state must be a vector of length >= 2, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise SchemaError("state has non-finite components")
    if np.linalg.norm(v) <= _ZERO:
        raise ZeroVector("state vector is zero")
    return v


def same_dimension(*vectors) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True, eq=False)
class Projector:
    """|psi><psi| / <psi|psi>, normalized in the standard inner product."""

    matrix: np.ndarray

    def defects(self) -> dict[str, float]:
        p = self.matrix
        return {
            "idempotent": float(np.linalg.norm(p @ p - p)),
            "hermitian": float(np.linalg.norm(p - p.conj().T)),
            "trace": float(abs(np.trace(p) - 1.0)),
        }

    def fidelity(self, other: "Projector") -> float:
        return float(np.trace(self.matrix @ other.matrix).real)


def projector_from_state(psi) -> Projector:
    psi = as_state(psi)
    # normalize first so huge or tiny scale factors cancel before the outer product
    u = psi / np.linalg.norm(psi)
    return Projector(np.outer(u, u.conj()))


@dataclass(frozen=True, eq=False)
class Ray:
    representative: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.representative)

    def projector(self) -> Projector:
        return projector_from_state(self.representative)


def canonical_vector(psi) -> np.ndarray:
    """Unit norm, first nonzero component real and positive."""
    psi = as_state(psi)
    u = psi / np.linalg.norm(psi)
    lead = u[np.flatnonzero(np.abs(u) > _ZERO)[0]]
    u = u * (abs(lead) / lead)
    k = np.flatnonzero(np.abs(u) > _ZERO)[0]
    u[k] = abs(u[k])
    return u


def canonicalize(psi) -> Ray:
    return Ray(canonical_vector(psi))


def rays_equal(r1: Ray, r2: Ray, tol: float = 1e-10) -> bool:
    same_dimension(r1.representative, r2.representative)
    return r1.projector().fidelity(r2.projector()) >= 1.0 - tol
