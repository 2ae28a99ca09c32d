"""Energy transfer functions, half-power cutoffs and periodograms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DataError
from .filtering import FilterSpec

__all__ = [
    "TransferCurve",
    "PeriodogramCurve",
    "LOG_FLOOR",
    "default_shift_grid",
    "transfer_closed",
    "transfer_exact",
    "half_power_shift",
    "periodogram",
    "two_sided_total",
]

LOG_FLOOR = 1e-300
_SINGULAR_GUARD = 1e-12


@dataclass(frozen=True, eq=False)
class TransferCurve:
    shifts: np.ndarray
    gains: np.ndarray
    spec: FilterSpec
    kind: Literal["exact", "closed_form"]

    @property
    def log_gains(self) -> np.ndarray:
        return np.log(np.maximum(self.gains, LOG_FLOOR))

    def metadata(self) -> dict:
        return {"kind": self.kind, "spec": self.spec.to_dict()}


@dataclass(frozen=True, eq=False)
class PeriodogramCurve:
    frequencies: np.ndarray
    power: np.ndarray
    n: int


def default_shift_grid(points: int = 2001) -> np.ndarray:
    """Evenly spaced frequency shifts on ``[-0.5, 0.5]``."""
    if points < 2:
        raise ValueError("grid needs at least two points")
    return np.linspace(-0.5, 0.5, points)


def _shifts(shifts) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(shifts, dtype=np.float64))
    if theta.ndim != 1:
        raise ValueError("shift grid must be one-dimensional")
    return theta


def transfer_closed(spec: FilterSpec, shifts) -> TransferCurve:
    """``(sin(pi m_r theta) / (m_r sin(pi theta))) ** (2k)``.

    Exact for odd integer windows and an approximation otherwise. Where
    ``sin(pi theta)`` vanishes the continuous limit is used.
    """
    theta = _shifts(shifts)
    m = spec.window.m_r
    nearest = np.round(theta)
    singular = np.abs(theta - nearest) < _SINGULAR_GUARD
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(math.pi * m * theta) / (m * np.sin(math.pi * theta))
    # limit at integer j: cos(pi m j) / cos(pi j)
    limit = np.cos(math.pi * m * nearest) / np.cos(math.pi * nearest)
    ratio = np.where(singular, limit, ratio)
    gains = (ratio * ratio) ** spec.k
    return TransferCurve(shifts=theta, gains=gains, spec=spec, kind="closed_form")


def transfer_exact(spec: FilterSpec, shifts) -> TransferCurve:
    """Squared magnitude of the frequency response of the coefficient table."""
    theta = _shifts(shifts)
    table = spec.table()
    a = table.normalized()
    h = table.half_support
    # symmetric weights: response is real, a_0 + 2 sum_{s>0} a_s cos(2 pi theta s)
    s = np.arange(1, h + 1)
    amp = a[h] + 2.0 * (np.cos(2.0 * math.pi * np.outer(theta, s)) @ a[h + 1 :])
    return TransferCurve(shifts=theta, gains=amp * amp, spec=spec, kind="exact")


def half_power_shift(spec: FilterSpec) -> float:
    """Approximate frequency shift where the energy transfer drops to 1/2."""
    q = 0.5 ** (1.0 / (2 * spec.k))
    m = spec.window.m_r
    return math.sqrt(6.0) / math.pi * math.sqrt((1.0 - q) / (m * m - q))


def periodogram(x) -> PeriodogramCurve:
    """``|DFT|^2 / n`` at Fourier frequencies ``j/n``, ``j = 0 .. n//2``.

    Complex input (band-passed output) is accepted; only nonnegative
    frequencies are reported in either case.
    """
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DataError("periodogram expects a one-dimensional series")
    n = len(arr)
    if n < 2:
        raise DataError("periodogram needs at least two observations")
    if not np.all(np.isfinite(arr)):
        raise DataError("periodogram input has missing or non-finite values")
    spectrum = np.fft.fft(arr)[: n // 2 + 1]
    power = (spectrum.real**2 + spectrum.imag**2) / n
    return PeriodogramCurve(frequencies=np.arange(n // 2 + 1) / n, power=power, n=n)


def two_sided_total(curve: PeriodogramCurve) -> float:
    """Sum over all ``n`` Fourier frequencies for a real series' half periodogram."""
    p = curve.power
    n = curve.n
    interior_end = len(p) - 1 if n % 2 == 0 else len(p)
    return float(p[0] + 2.0 * p[1:interior_end].sum() + (p[-1] if n % 2 == 0 else 0.0))
