"""Optimal-speed (brachistochrone) Hamiltonians for standard and pseudo-Hermitian quantum mechanics."""

from .brachistochrone import (BrachistochroneResult, EnergyScale, construct_closed_form,
                              construct_explicit_2x2, construct_spectral, explicit_tau_2x2, tau_min)
from .evolution import Trajectory, measured_speed, propagate, sample_trajectory, time_to_target
from .geometry import (energy_uncertainty, geodesic_distance, line_element_squared, path_length)
from .metric import (MetricOperator, MetricParams2x2, equivalent_hermitian, metric_from_params,
                     params_from_2x2, pseudo_adjoint, pseudo_inner)
from .states import Ray, canonicalize, projector_from_state, rays_equal

__version__ = "0.1.0"

__all__ = [
    "BrachistochroneResult", "EnergyScale", "MetricOperator", "MetricParams2x2", "Ray", "Trajectory",
    "canonicalize", "construct_closed_form", "construct_explicit_2x2", "construct_spectral",
    "energy_uncertainty", "equivalent_hermitian", "explicit_tau_2x2", "geodesic_distance",
    "line_element_squared", "measured_speed", "metric_from_params", "params_from_2x2", "path_length",
    "projector_from_state", "propagate", "pseudo_adjoint", "pseudo_inner", "rays_equal",
    "sample_trajectory", "tau_min", "time_to_target",
]
