"""Kolmogorov-Zurbenko Fourier transform band-pass filters with real-valued windows."""

from .errors import DataError, DomainError, EKZFTError, SeriesTooShortError
from .filtering import (
    FilteredSeries,
    FilterSpec,
    apply_direct,
    apply_iterated,
    apply_lowpass,
    make_spec,
    reconstruct_band,
)
from .simulation import (
    ExperimentConfig,
    ExperimentReport,
    attenuation_audit,
    run_band_experiment,
    white_noise,
)
from .spectral import (
    PeriodogramCurve,
    TransferCurve,
    half_power_shift,
    periodogram,
    transfer_closed,
    transfer_exact,
)
from .window import (
    CoefficientTable,
    WindowDecomposition,
    base_polynomial,
    coefficient_table,
    convolve,
    decompose_window,
)

__version__ = "0.1.0"
