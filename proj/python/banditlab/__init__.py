"""Composite, anonymous-feedback bandit simulations."""

from ._core import (
    ConfigError,
    F,
    ParseError,
    compute_K,
    f,
    kernel_d1_d2,
    phase_plan,
    preset_text,
    presets,
    run,
    validate_f,
)

__all__ = [
    "ConfigError",
    "F",
    "ParseError",
    "compute_K",
    "f",
    "kernel_d1_d2",
    "phase_plan",
    "preset_text",
    "presets",
    "run",
    "validate_f",
]
