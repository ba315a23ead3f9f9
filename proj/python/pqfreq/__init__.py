"""Generalized principal frequencies, capacities and Cheeger constants on grid domains."""

from ._pqfreq import (
    Domain,
    ValidationError,
    cheeger,
    cheeger_tv,
    disk_capacity,
    disk_relative_capacity,
    inf,
    linf_frequency,
    neumann_constant,
    principal_frequency,
    punctured_ball_value,
    punctured_linf_lower,
    punctured_radial,
    run_cli,
    scaling_exponent,
    theta,
    theta_lower_bound,
)

__all__ = [
    "Domain",
    "ValidationError",
    "cheeger",
    "cheeger_tv",
    "disk_capacity",
    "disk_relative_capacity",
    "inf",
    "linf_frequency",
    "neumann_constant",
    "principal_frequency",
    "punctured_ball_value",
    "punctured_linf_lower",
    "punctured_radial",
    "run_cli",
    "scaling_exponent",
    "theta",
    "theta_lower_bound",
]
