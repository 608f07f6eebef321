"""Probability that a cocked hat covers the true position."""

from ._cockedhat import (
    DegenerateError,
    ErrorModel,
    Scenario,
    UsageError,
    ValidationError,
    classify,
    count_regions,
    counterexample,
    exact_delta,
    exact_unbounded,
    in_unbounded_component,
    is_valid_model,
    max_valid_half_width,
    random_two_ray_model,
    random_valid_scenario,
    simulate_delta,
    simulate_unbounded,
    special_selections,
)

__all__ = [
    "DegenerateError",
    "ErrorModel",
    "Scenario",
    "UsageError",
    "ValidationError",
    "classify",
    "count_regions",
    "counterexample",
    "exact_delta",
    "exact_unbounded",
    "in_unbounded_component",
    "is_valid_model",
    "max_valid_half_width",
    "random_two_ray_model",
    "random_valid_scenario",
    "simulate_delta",
    "simulate_unbounded",
    "special_selections",
]
