"""Barrier-crossing kinetics of a generalized Langevin equation driven by
structured internal noise (HN / HVN / HAN, plus a white-noise baseline).

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._core import (
    CorrelationForm,
    NoiseKind,
    NoiseModel,
    NumericalError,
    SpectralDecomposition,
    ValidationError,
    __version__,
    correlation_form,
    empirical_kappa,
    kernel_laplace,
    kinetics_curves,
    make_noise_model,
    mean_position,
    passing_probability,
    rate_ratio_by_flux,
    simulate_ensemble,
    spectral_decomposition,
    transmission,
    tst_rate,
    variance,
)

__all__ = [
    "CorrelationForm",
    "NoiseKind",
    "NoiseModel",
    "NumericalError",
    "SpectralDecomposition",
    "ValidationError",
    "__version__",
    "correlation_form",
    "empirical_kappa",
    "kernel_laplace",
    "kinetics_curves",
    "make_noise_model",
    "mean_position",
    "passing_probability",
    "rate_ratio_by_flux",
    "simulate_ensemble",
    "spectral_decomposition",
    "transmission",
    "tst_rate",
    "variance",
]
