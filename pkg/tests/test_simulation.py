import json
import math

import numpy as np
import pytest

from ekzft.errors import DomainError, SeriesTooShortError
from ekzft.filtering import make_spec
from ekzft.simulation import (
    ExperimentConfig,
    attenuation_audit,
    nearest_bin,
    replicate_noise,
    run_band_experiment,
    white_noise,
)


@pytest.fixture(scope="module")
def default_report():
    return run_band_experiment(ExperimentConfig())


def test_white_noise_is_deterministic():
    a = white_noise(1000, 1.5, seed=42)
    b = white_noise(1000, 1.5, seed=42)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, white_noise(1000, 1.5, seed=43))


def test_white_noise_moments():
    x = white_noise(10**5, 1.0, seed=1)
    assert abs(x.mean()) < 4 / math.sqrt(10**5)
    y = white_noise(10**5, 2.0, seed=2)
    assert y.var() == pytest.approx(4.0, abs=0.3)


@pytest.mark.parametrize("n, sigma", [(0, 1.0), (10, 0.0), (10, -1.0), (10, float("nan")), (2.5, 1.0)])
def test_white_noise_rejects(n, sigma):
    with pytest.raises(DomainError):
        white_noise(n, sigma, seed=0)


def test_replicate_substreams_are_distinct():
    a = replicate_noise(100, 1.0, 7, 0)
    b = replicate_noise(100, 1.0, 7, 1)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, replicate_noise(100, 1.0, 7, 0))


def test_config_validation():
    with pytest.raises(DomainError):
        ExperimentConfig(n=32)
    with pytest.raises(DomainError):
        ExperimentConfig(replicates=0)
    with pytest.raises(DomainError):
        ExperimentConfig(sigma=0)
    with pytest.raises(DomainError):
        ExperimentConfig(comparison_windows=(8,))


def test_series_too_short_for_support():
    cfg = ExperimentConfig(n=64, replicates=1, spec=make_spec(31, 3, 0.1))
    with pytest.raises(SeriesTooShortError):
        run_band_experiment(cfg)


def test_suppression_at_harmonics(default_report):
    f = default_report.filtered_periodogram_mean
    for target in (0.125, 0.375, 0.0, 0.5):
        assert f.power[nearest_bin(f.frequencies, target)] < 0.01
    freqs = sorted(row["frequency"] for row in default_report.suppression)
    assert freqs == [0.0, 0.125, 0.375, 0.5]


def test_pass_band_passes_energy():
    report = run_band_experiment(ExperimentConfig(replicates=1))
    f = report.filtered_periodogram_mean
    b = nearest_bin(f.frequencies, 0.25)
    assert np.all(f.power[b - 1 : b + 2] > 0)


def test_deviation_summary_mean(default_report):
    s = default_report.deviation_summary
    assert s["qualifying_bins"] > 0
    assert s["mean"] < 0.10


def test_raw_periodogram_near_sigma_squared():
    report = run_band_experiment(ExperimentConfig(sigma=2.0, replicates=100))
    assert np.mean(report.raw_periodogram_mean.power) == pytest.approx(4.0, rel=0.05)
    assert np.mean(report.ratios()) == pytest.approx(1.0, abs=0.05)


def test_replicate_order_independence():
    cfg = ExperimentConfig(replicates=24)
    serial = run_band_experiment(cfg)
    threaded = run_band_experiment(cfg, workers=4)
    assert np.array_equal(
        serial.filtered_periodogram_mean.power, threaded.filtered_periodogram_mean.power
    )
    assert np.array_equal(serial.raw_periodogram_mean.power, threaded.raw_periodogram_mean.power)
    assert serial.to_dict() == threaded.to_dict()


def test_monotone_suppression_in_iterations():
    reports = {
        k: run_band_experiment(ExperimentConfig(replicates=50, spec=make_spec(8, k, 0.25)))
        for k in (1, 2, 3)
    }
    for k in (1, 2):
        lo, hi = reports[k], reports[k + 1]
        fa, fb = lo.filtered_periodogram_mean, hi.filtered_periodogram_mean
        mask = lo.theory_curve.gains < 0.5
        for f, p in zip(fa.frequencies[mask], fa.power[mask]):
            assert fb.power[nearest_bin(fb.frequencies, f)] <= p


def test_theory_consistency_500_replicates():
    report = run_band_experiment(ExperimentConfig(replicates=500))
    ratios = report.ratios()
    assert ratios.size == report.deviation_summary["qualifying_bins"]
    assert np.all((ratios >= 0.85) & (ratios <= 1.15))


def test_report_files(tmp_path, default_report):
    paths = default_report.write(tmp_path)
    names = sorted(p.name for p in paths)
    assert "ekzft_m8.0_k1_v0.25_filtered_periodogram.csv" in names
    assert "ekzft_m8.0_k1_v0.25_report.json" in names
    doc = json.loads((tmp_path / "ekzft_m8.0_k1_v0.25_report.json").read_text())
    assert doc["metadata"]["replicates"] == 200
    assert doc["metadata"]["spec"]["m_r"] == 8.0
    header = (tmp_path / "ekzft_m8.0_k1_v0.25_filtered_periodogram.csv").read_text().splitlines()[0]
    assert header == "frequency,power"
    assert not list(tmp_path.glob("*.tmp"))


def test_audit_even_window_against_neighbours():
    rows = attenuation_audit(make_spec(8, 1, 0.25), [7, 9])
    spec_row, k7, k9 = rows
    assert spec_row["gain_at_target"] < 1e-20
    assert k7["gain_at_target"] == pytest.approx(1 / 49, abs=1e-12)
    assert k9["gain_at_target"] == pytest.approx(1 / 81, abs=1e-12)
    assert spec_row["shifts"] == [1 / 8, 2 / 8, 3 / 8, 4 / 8]
    assert max(spec_row["gains"]) < 1e-20
    assert spec_row["half_power_shift"] < k7["half_power_shift"]


def test_audit_self_comparison():
    spec_row, neighbour = attenuation_audit(make_spec(7, 1, 0.1), [7])
    for key in ("gains", "half_power_shift", "gain_at_target", "shifts"):
        assert spec_row[key] == neighbour[key]


def test_audit_squares_under_iteration():
    (k2,) = attenuation_audit(make_spec(2.5, 2, 0.3), [])
    (k1,) = attenuation_audit(make_spec(2.5, 1, 0.3), [])
    assert k2["gain_at_target"] == pytest.approx(k1["gain_at_target"] ** 2, rel=1e-12)
    assert k2["gain_at_target"] == pytest.approx(0.0000533, abs=5e-7)


def test_audit_rejects_even_neighbour():
    with pytest.raises(DomainError):
        attenuation_audit(make_spec(8, 1, 0.25), [8])
