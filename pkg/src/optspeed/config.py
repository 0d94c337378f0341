"""Central tolerance record.

The CLI may pick a profile through the ``OPTSPEED_TOLERANCE_PROFILE``
environment variable; nothing else reads the environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-12            # construction / input validation of Hermiticity
    pseudo_hermitian: float = 1e-9
    variance_floor: float = 1e-12
    arrival: float = 1e-10
    spectrum: float = 1e-10
    norm_drift: float = 1e-9
    speed: float = 1e-6
    path_length: float = 1e-8
    closed_form: float = 1e-10
    isometry: float = 1e-10


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(pseudo_hermitian=1e-11, arrival=1e-12, spectrum=1e-12,
                         norm_drift=1e-11, closed_form=1e-12),
    "loose": Tolerances(rel=1e-10, pseudo_hermitian=1e-7, arrival=1e-8, spectrum=1e-8,
                        norm_drift=1e-7, speed=1e-4, path_length=1e-6, closed_form=1e-8),
}

DEFAULT = PROFILES["default"]


def profile_from_env(env=None) -> Tolerances:
    name = (env if env is not None else os.environ).get("OPTSPEED_TOLERANCE_PROFILE", "default")
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown tolerance profile {name!r}; choose from {sorted(PROFILES)}")


def with_overrides(tol: Tolerances, **overrides) -> Tolerances:
    return replace(tol, **{k: float(v) for k, v in overrides.items() if v is not None})
