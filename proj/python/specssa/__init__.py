"""Singular spectrum analysis with a filter-bank view of the power spectrum."""

from ._core import (
    SpecssaError,
    analyze,
    components,
    decompose_spectrum,
    detect_peaks,
    detrend,
    eigen,
    filter_bank,
    gaussian,
    group,
    power_spectrum,
    run_cli,
    schematic,
    trajectory,
)

__all__ = [
    "SpecssaError",
    "analyze",
    "components",
    "decompose_spectrum",
    "detect_peaks",
    "detrend",
    "eigen",
    "filter_bank",
    "gaussian",
    "group",
    "power_spectrum",
    "run_cli",
    "schematic",
    "trajectory",
]
