"""Window decomposition and coefficient tables for KZFT/EKZFT filters.

A real window length ``m_r > 1`` is split into an odd integer base ``m_o``
and an excess ``m_d = m_r - m_o`` in ``[0, 2)``. The single-pass weights are
``m_o`` ones flanked by two end weights of ``m_d / 2``; the ``k``-pass table
is the ``k``-fold self-convolution of that base.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "WindowDecomposition",
    "CoefficientTable",
    "decompose_window",
    "base_polynomial",
    "convolve",
    "coefficient_table",
]


@dataclass(frozen=True)
class WindowDecomposition:
    m_r: float
    m_o: int
    m_d: float

    @property
    def is_odd_integer(self) -> bool:
        return self.m_d == 0.0

    @property
    def pass_half_support(self) -> int:
        """Half-width of one filter pass."""
        return (self.m_o - 1) // 2 if self.is_odd_integer else (self.m_o + 1) // 2


def decompose_window(m_r: float) -> WindowDecomposition:
    """Split ``m_r`` into the greatest odd integer ``m_o <= m_r`` and the rest.

    >>> decompose_window(2.5)
    WindowDecomposition(m_r=2.5, m_o=1, m_d=1.5)
    """
    m_r = float(m_r)
    if not math.isfinite(m_r) or m_r <= 1.0:
        raise DomainError(f"window length must be a finite real > 1, got {m_r!r}")
    m_o = math.floor(m_r)
    if m_o % 2 == 0:
        m_o -= 1
    return WindowDecomposition(m_r=m_r, m_o=int(m_o), m_d=m_r - m_o)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Symmetric weights ``a_s`` for ``s = -h .. h`` (not yet normalized)."""

    window: WindowDecomposition
    iterations: int
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", _readonly(self.weights))

    @property
    def half_support(self) -> int:
        return (len(self.weights) - 1) // 2

    @property
    def steps(self) -> np.ndarray:
        h = self.half_support
        return np.arange(-h, h + 1)

    @property
    def norm(self) -> float:
        """The normalizing constant ``m_r ** k``."""
        return self.window.m_r ** self.iterations

    def normalized(self) -> np.ndarray:
        return self.weights / self.norm

    def __eq__(self, other):
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return (
            self.window == other.window
            and self.iterations == other.iterations
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "m_r": self.window.m_r,
            "k": self.iterations,
            "half_support": self.half_support,
            "weights": [float(w) for w in self.weights],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def base_polynomial(w: WindowDecomposition) -> CoefficientTable:
    """Single-pass weights ``{m_d/2, 1, ..., 1, m_d/2}``.

    Zero end weights (odd integer windows) are trimmed so the result is the
    plain KZFT table of ``m_o`` ones.
    """
    if w.is_odd_integer:
        weights = np.ones(w.m_o)
    else:
        weights = np.ones(w.m_o + 2)
        weights[0] = weights[-1] = w.m_d / 2.0
    return CoefficientTable(window=w, iterations=1, weights=weights)


def convolve(a, b) -> np.ndarray:
    """Full discrete convolution of two weight sequences.

    Each output is the correctly rounded sum of its products
    (``math.fsum``), so the result does not depend on summation order and
    symmetric inputs give a bitwise symmetric output.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise ValueError("convolve expects two non-empty one-dimensional sequences")
    # row i, column j holds a[i] * b[j]; output index i + j is an anti-diagonal
    products = np.fliplr(np.outer(a, b))
    m = len(b)
    out = np.empty(len(a) + m - 1)
    for idx in range(len(out)):
        out[idx] = math.fsum(products.diagonal(m - 1 - idx))
    return out


def coefficient_table(m_r: float, k: int) -> CoefficientTable:
    """Weights of the ``k``-pass filter with window ``m_r``.

    Built as ``((base * base) * base) ...`` so that
    ``table(k + 1) == convolve(table(k), base)`` holds bit for bit.
    """
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"iterations must be a positive integer, got {k!r}")
    k = int(k)
    w = decompose_window(m_r)
    base = base_polynomial(w).weights
    weights = base
    for _ in range(k - 1):
        weights = convolve(weights, base)
    return CoefficientTable(window=w, iterations=k, weights=weights)
