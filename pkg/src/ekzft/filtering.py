"""Applying KZFT/EKZFT band-pass filters to unit-spaced series.

Output at an interior time ``t`` is::

    sum_s  a_s / m_r**k * exp(-2j*pi*nu*s) * x[t + s]

The result is left at its original frequency (no demodulation to baseband),
so a real band component is recovered as ``2 * Re(z)`` for ``0 < nu < 0.5``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DataError, DomainError, SeriesTooShortError
from .window import (
    CoefficientTable,
    WindowDecomposition,
    base_polynomial,
    coefficient_table,
    decompose_window,
)

EdgePolicy = Literal["missing", "drop"]
EDGE_POLICIES = ("missing", "drop")

__all__ = [
    "EdgePolicy",
    "FilterSpec",
    "FilteredSeries",
    "make_spec",
    "apply_direct",
    "apply_iterated",
    "apply_lowpass",
    "reconstruct_band",
    "phase_weights",
]


@dataclass(frozen=True)
class FilterSpec:
    window: WindowDecomposition
    k: int
    nu: float = 0.0

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise DomainError(f"iterations must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        nu = float(self.nu)
        if not (0.0 <= nu < 0.5):
            raise DomainError(f"center frequency must lie in [0, 0.5), got {nu!r}")
        object.__setattr__(self, "nu", nu)

    @property
    def m_r(self) -> float:
        return self.window.m_r

    @property
    def half_support(self) -> int:
        return self.k * self.window.pass_half_support

    @property
    def min_length(self) -> int:
        return 2 * self.half_support + 1

    def table(self) -> CoefficientTable:
        return coefficient_table(self.window.m_r, self.k)

    def label(self) -> str:
        kind = "kzft" if self.window.is_odd_integer else "ekzft"
        return f"{kind}_m{self.m_r!r}_k{self.k}_v{self.nu!r}"

    def to_dict(self) -> dict:
        return {
            "m_r": self.window.m_r,
            "m_o": self.window.m_o,
            "m_d": self.window.m_d,
            "k": self.k,
            "nu": self.nu,
        }


def make_spec(m_r: float, k: int = 1, nu: float = 0.0) -> FilterSpec:
    return FilterSpec(window=decompose_window(m_r), k=k, nu=nu)


@dataclass(frozen=True, eq=False)
class FilteredSeries:
    """Filter output aligned to input time indices.

    ``values[i]`` belongs to time ``offset + i``. Under the ``"missing"``
    policy ``offset`` is 0 and the edge positions are flagged in ``missing``
    (their values are NaN). Under ``"drop"`` only interior points are kept.
    """

    values: np.ndarray
    missing: np.ndarray
    offset: int = 0

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.values))

    def interior(self) -> np.ndarray:
        return self.values[~self.missing]

    def interior_times(self) -> np.ndarray:
        return self.times[~self.missing]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)


def _as_series(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size == 0:
        raise DataError("series must be a non-empty one-dimensional sequence")
    if not np.iscomplexobj(arr):
        arr = arr.astype(np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        raise DataError("series contains non-finite values")
    return arr


def _check_length(n: int, spec: FilterSpec) -> None:
    if n < spec.min_length:
        raise SeriesTooShortError(n, spec.min_length)


def phase_weights(weights: np.ndarray, nu: float, norm: float) -> np.ndarray:
    """``weights / norm`` modulated by ``exp(-2j*pi*nu*s)``; real when nu == 0."""
    w = np.asarray(weights, dtype=np.float64) / norm
    if nu == 0.0:
        return w
    h = (len(w) - 1) // 2
    s = np.arange(-h, h + 1)
    return w * np.exp(-2j * math.pi * nu * s)


def _valid_pass(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    # out[j] = sum_s w[s] * x[j + h + s], j = 0 .. n - 2h - 1
    return np.convolve(x, w[::-1], mode="valid")


def _wrap(interior: np.ndarray, n: int, h: int, edges: str) -> FilteredSeries:
    if edges == "drop":
        return FilteredSeries(
            values=interior, missing=np.zeros(len(interior), dtype=bool), offset=h
        )
    values = np.full(n, np.nan, dtype=interior.dtype)
    values[h : n - h] = interior
    missing = np.ones(n, dtype=bool)
    missing[h : n - h] = False
    return FilteredSeries(values=values, missing=missing, offset=0)


def _check_edges(edges: str) -> None:
    if edges not in EDGE_POLICIES:
        raise DomainError(f"unknown edge policy {edges!r}; expected one of {EDGE_POLICIES}")


def apply_direct(x, spec: FilterSpec, edges: EdgePolicy = "missing") -> FilteredSeries:
    """Filter ``x`` in one pass with the full ``k``-iteration coefficient table."""
    _check_edges(edges)
    x = _as_series(x)
    _check_length(len(x), spec)
    table = spec.table()
    w = phase_weights(table.weights, spec.nu, table.norm)
    return _wrap(_valid_pass(x, w), len(x), table.half_support, edges)


def apply_iterated(x, spec: FilterSpec, edges: EdgePolicy = "missing") -> FilteredSeries:
    """Filter ``x`` by ``k`` successive single-pass filters.

    Each pass carries the phase factor, so on interior points the result
    agrees with :func:`apply_direct` up to rounding.
    """
    _check_edges(edges)
    x = _as_series(x)
    _check_length(len(x), spec)
    base = base_polynomial(spec.window)
    w = phase_weights(base.weights, spec.nu, spec.window.m_r)
    y = x
    for _ in range(spec.k):
        y = _valid_pass(y, w)
    return _wrap(y, len(x), spec.half_support, edges)


def apply_lowpass(x, m_r: float, k: int, edges: EdgePolicy = "missing") -> FilteredSeries:
    """KZ / EKZ low-pass filter (the ``nu = 0`` case); real output for real input."""
    spec = make_spec(m_r, k, 0.0)
    x = _as_series(x)
    if np.iscomplexobj(x):
        raise DataError("low-pass filter expects a real series")
    return apply_direct(x, spec, edges)


def reconstruct_band(z: FilteredSeries, nu: float) -> FilteredSeries:
    """Real band component from a filtered series produced with the same ``nu``.

    ``nu`` cannot be checked against the filter that produced ``z``; passing
    a different one silently gives the wrong scale.
    """
    nu = float(nu)
    if not (0.0 <= nu < 0.5):
        raise DomainError(f"center frequency must lie in [0, 0.5), got {nu!r}")
    factor = 1.0 if nu == 0.0 else 2.0
    values = factor * np.real(z.values)
    return FilteredSeries(values=values, missing=z.missing.copy(), offset=z.offset)
