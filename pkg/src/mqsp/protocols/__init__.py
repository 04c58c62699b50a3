"""Builders for the applied constructions."""

from .bessel import bessel_i_scaled
from .dlog import build_discrete_log_protocols
from .gaussian import (
    GaussianWindowSpec,
    build_gaussian_window_state,
    discarded_norm,
    window_weights,
    windowed_distribution,
)
from .phase_estimation import build_phase_estimation_protocol, build_phase_estimation_state
from .phase_location import (
    ArcSpec,
    PhaseLocationBuild,
    build_phase_location,
    build_phase_location_state,
    in_arc,
)
from .sign import (
    SignDegree,
    bessel_sine_coefficients,
    build_sign_poly,
    find_sign_degree,
    sign_error,
    sine_coefficients,
)
from .reports import BuildReport

__all__ = [
    "ArcSpec",
    "BuildReport",
    "GaussianWindowSpec",
    "PhaseLocationBuild",
    "SignDegree",
    "bessel_i_scaled",
    "bessel_sine_coefficients",
    "build_discrete_log_protocols",
    "build_gaussian_window_state",
    "build_phase_estimation_protocol",
    "build_phase_estimation_state",
    "build_phase_location",
    "build_phase_location_state",
    "build_sign_poly",
    "discarded_norm",
    "find_sign_degree",
    "in_arc",
    "sign_error",
    "sine_coefficients",
    "window_weights",
    "windowed_distribution",
]
