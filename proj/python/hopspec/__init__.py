"""Absorption spectra of exciton aggregates (Laplace-domain hierarchy solver)."""

from ._hopspec import (
    ConfigError,
    SolverError,
    __version__,
    analytic_modes,
    dense_vibronic,
    find_peaks,
    franck_condon,
    spectrum,
    sweep,
    validate,
)

__all__ = [
    "ConfigError",
    "SolverError",
    "__version__",
    "analytic_modes",
    "dense_vibronic",
    "find_peaks",
    "franck_condon",
    "spectrum",
    "sweep",
    "validate",
]
