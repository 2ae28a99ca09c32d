"""White-noise experiments and attenuation audits.

Noise comes from NumPy's ``PCG64`` bit generator driven by a
``SeedSequence``; replicate ``r`` of an experiment seeded with ``seed`` uses
``SeedSequence(seed, spawn_key=(r,))`` so every replicate is reproducible on
its own, independent of evaluation order.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .errors import DomainError, SeriesTooShortError
from .filtering import FilterSpec, apply_direct, make_spec
from .spectral import (
    PeriodogramCurve,
    TransferCurve,
    half_power_shift,
    periodogram,
    transfer_exact,
)

__all__ = [
    "DEFAULT_SEED",
    "ExperimentConfig",
    "ExperimentReport",
    "white_noise",
    "replicate_noise",
    "run_band_experiment",
    "nearest_bin",
    "attenuation_audit",
]

DEFAULT_SEED = 20240101
QUALIFYING_GAIN = 0.05


def _generator(seed: int, replicate: int | None = None) -> np.random.Generator:
    if replicate is None:
        ss = np.random.SeedSequence(int(seed))
    else:
        ss = np.random.SeedSequence(int(seed), spawn_key=(int(replicate),))
    return np.random.Generator(np.random.PCG64(ss))


def white_noise(n: int, sigma: float = 1.0, seed: int = DEFAULT_SEED) -> np.ndarray:
    """``n`` independent N(0, sigma^2) draws; identical for identical arguments."""
    if int(n) != n or n < 1:
        raise DomainError(f"series length must be a positive integer, got {n!r}")
    if not (sigma > 0 and math.isfinite(sigma)):
        raise DomainError(f"sigma must be a finite positive number, got {sigma!r}")
    return sigma * _generator(seed).standard_normal(int(n))


def replicate_noise(n: int, sigma: float, seed: int, replicate: int) -> np.ndarray:
    """Noise for one replicate of an experiment (its own substream)."""
    return sigma * _generator(seed, replicate).standard_normal(int(n))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 1000
    sigma: float = 1.0
    seed: int = DEFAULT_SEED
    replicates: int = 200
    spec: FilterSpec = field(default_factory=lambda: make_spec(8.0, 1, 0.25))
    comparison_windows: tuple[int, ...] = (7, 9)

    def __post_init__(self):
        if self.n < 64:
            raise DomainError(f"n must be at least 64, got {self.n}")
        if self.replicates < 1:
            raise DomainError(f"replicates must be positive, got {self.replicates}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be a finite positive number, got {self.sigma}")
        for m in self.comparison_windows:
            if int(m) != m or m < 3 or m % 2 == 0:
                raise DomainError(f"comparison windows must be odd integers > 1, got {m}")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma": self.sigma,
            "seed": self.seed,
            "replicates": self.replicates,
            "spec": self.spec.to_dict(),
            "comparison_windows": list(self.comparison_windows),
        }


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    config: ExperimentConfig
    raw_periodogram_mean: PeriodogramCurve
    filtered_periodogram_mean: PeriodogramCurve
    theory_curve: TransferCurve  # gains already scaled by sigma^2
    deviation_summary: dict
    suppression: list[dict]
    audit: list[dict]

    def ratios(self) -> np.ndarray:
        """Filtered mean power over theory at qualifying bins."""
        mask = self.theory_curve.gains > QUALIFYING_GAIN * self.config.sigma**2
        return self.filtered_periodogram_mean.power[mask] / self.theory_curve.gains[mask]

    def to_dict(self) -> dict:
        return {
            "metadata": self.config.to_dict(),
            "filtered_length": self.filtered_periodogram_mean.n,
            "deviation_summary": self.deviation_summary,
            "suppression": self.suppression,
            "audit": self.audit,
        }

    def write(self, directory) -> list[Path]:
        """JSON summary plus CSV curves; file names carry the filter label."""
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        label = self.config.spec.label()
        f = self.filtered_periodogram_mean
        r = self.raw_periodogram_mean
        t = self.theory_curve
        files = {
            f"{label}_report.json": json.dumps(self.to_dict(), indent=2) + "\n",
            f"{label}_raw_periodogram.csv": io.format_csv(
                ["frequency", "power"], zip(r.frequencies, r.power)
            ),
            f"{label}_filtered_periodogram.csv": io.format_csv(
                ["frequency", "power"], zip(f.frequencies, f.power)
            ),
            f"{label}_theory.csv": io.format_csv(
                ["frequency", "shift", "gain"],
                zip(f.frequencies, t.shifts, t.gains),
            ),
        }
        paths = []
        for name, text in files.items():
            path = out / name
            io.atomic_write(path, text)
            paths.append(path)
        return paths


def _replicate_periodograms(cfg: ExperimentConfig, r: int):
    x = replicate_noise(cfg.n, cfg.sigma, cfg.seed, r)
    z = apply_direct(x, cfg.spec, edges="drop").values
    return periodogram(x).power, periodogram(z).power


def nearest_bin(frequencies: np.ndarray, target: float) -> int:
    return int(np.argmin(np.abs(frequencies - target)))


def _reported_frequency(f: float) -> float | None:
    """Alias ``f`` into [-0.5, 0.5]; None if it falls in the unreported half."""
    f = (f + 0.5) % 1.0 - 0.5
    if math.isclose(f, -0.5, abs_tol=1e-12):
        f = 0.5
    return f if f >= -1e-12 else None


def run_band_experiment(
    cfg: ExperimentConfig = ExperimentConfig(), workers: int = 1
) -> ExperimentReport:
    """Average raw and filtered periodograms of white noise over replicates.

    The filtered series is the complex band-passed output with edge points
    dropped; its expected periodogram is ``sigma^2 * |B(f - nu)|^2``.
    """
    spec = cfg.spec
    if cfg.n < spec.min_length + 1:
        raise SeriesTooShortError(cfg.n, spec.min_length + 1)
    raw_sum = None
    filt_sum = None
    replicates = range(cfg.replicates)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _replicate_periodograms(cfg, r), replicates))
    else:
        results = (_replicate_periodograms(cfg, r) for r in replicates)
    # summing in replicate order keeps the result independent of scheduling
    for raw, filt in results:
        raw_sum = raw if raw_sum is None else raw_sum + raw
        filt_sum = filt if filt_sum is None else filt_sum + filt
    n_filt = cfg.n - 2 * spec.half_support
    raw_mean = PeriodogramCurve(
        frequencies=np.arange(cfg.n // 2 + 1) / cfg.n, power=raw_sum / cfg.replicates, n=cfg.n
    )
    freqs = np.arange(n_filt // 2 + 1) / n_filt
    filt_mean = PeriodogramCurve(frequencies=freqs, power=filt_sum / cfg.replicates, n=n_filt)

    exact = transfer_exact(spec, freqs - spec.nu)
    theory = TransferCurve(
        shifts=exact.shifts, gains=cfg.sigma**2 * exact.gains, spec=spec, kind="exact"
    )
    mask = exact.gains > QUALIFYING_GAIN
    ratio = filt_mean.power[mask] / theory.gains[mask]
    rel = np.abs(ratio - 1.0)
    deviation = {
        "qualifying_bins": int(mask.sum()),
        "gain_threshold": QUALIFYING_GAIN,
        "max": float(rel.max()) if rel.size else 0.0,
        "mean": float(rel.mean()) if rel.size else 0.0,
        "min_ratio": float(ratio.min()) if rel.size else 1.0,
        "max_ratio": float(ratio.max()) if rel.size else 1.0,
    }

    suppression = []
    for j in range(1, int(math.floor(spec.m_r / 2.0)) + 1):
        for sign in (-1, 1):
            shift = sign * j / spec.m_r
            target = _reported_frequency(spec.nu + shift)
            if target is None:
                continue
            b = nearest_bin(freqs, target)
            suppression.append(
                {
                    "shift": shift,
                    "frequency": target,
                    "bin_frequency": float(freqs[b]),
                    "filtered_power": float(filt_mean.power[b]),
                    "theory": float(theory.gains[b]),
                }
            )

    audit = attenuation_audit(spec, list(cfg.comparison_windows))
    return ExperimentReport(
        config=cfg,
        raw_periodogram_mean=raw_mean,
        filtered_periodogram_mean=filt_mean,
        theory_curve=theory,
        deviation_summary=deviation,
        suppression=suppression,
        audit=audit,
    )


def attenuation_audit(spec: FilterSpec, neighbors) -> list[dict]:
    """Compare ``spec`` with neighbouring odd-window KZFT filters.

    Every row is evaluated at the shifts ``j / m_r`` of the audited spec, so
    the neighbours show how much leaks through where ``spec`` is designed
    to suppress.
    """
    m_r = spec.m_r
    shifts = np.array([j / m_r for j in range(1, int(math.floor(m_r / 2.0)) + 1)])
    if shifts.size == 0:
        shifts = np.array([1.0 / m_r])
    rows = []
    candidates = [("spec", spec)]
    for m in neighbors:
        if int(m) != m or m <= 1 or int(m) % 2 == 0:
            raise DomainError(f"neighbour windows must be odd integers > 1, got {m!r}")
        candidates.append(("neighbor", make_spec(int(m), spec.k, spec.nu)))
    for role, s in candidates:
        gains = transfer_exact(s, shifts).gains
        target = transfer_exact(s, [1.0 / m_r]).gains[0]
        rows.append(
            {
                "role": role,
                "label": s.label(),
                "m_r": s.m_r,
                "k": s.k,
                "nu": s.nu,
                "shifts": [float(v) for v in shifts],
                "gains": [float(g) for g in gains],
                "half_power_shift": half_power_shift(s),
                "gain_at_target": float(target),
            }
        )
    return rows
