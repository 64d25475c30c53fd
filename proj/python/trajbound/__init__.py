"""Trajectory-based generalization bound toolkit."""

from ._trajbound import (
    DivergenceError,
    DomainError,
    Error,
    EstimationError,
    FormatError,
    NumericalError,
    analyze,
    bg_index,
    box_dimension,
    enclosing_ball,
    esd_eigenvalues,
    estimate_hurst,
    fbm_covariance,
    full_bound,
    integrate_sde,
    power_law_index,
    rademacher_bound,
    read_log,
    sample_fbm,
    sample_fgn,
    spectral_norm,
    write_log,
)

__all__ = [name for name in dir() if not name.startswith("_")]
