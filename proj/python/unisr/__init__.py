"""Python bindings for the unisr geodesic-flow library."""

from ._core import (
    IntegrationError,
    ad_matrix,
    classify,
    integrals,
    jacobian,
    killing_form,
    numerical_rank,
    simulate,
    to_pendulum,
    verify,
    vertical_field,
)

__all__ = [
    "IntegrationError",
    "ad_matrix",
    "classify",
    "integrals",
    "jacobian",
    "killing_form",
    "numerical_rank",
    "simulate",
    "to_pendulum",
    "verify",
    "vertical_field",
]
