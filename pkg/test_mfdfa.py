#!/usr/bin/env python3
"""
Tests for MF-DFA: profile, detrended variances, generalized Hurst exponents,
Legendre spectrum, surrogate decomposition and averaging.
"""

import os
import sys

import numpy as np
import pytest
from pydantic import ValidationError

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.data_models.errors import GridMismatch, InsufficientScales, WindowTooLarge, ZeroDeltaH
from src.data_models.results import ScalingResult
from src.data_models.series import RealSeries
from src.data_models.specs import MfdfaConfig, SurrogateSpec, default_s_grid, default_z_grid
from src.mfdfa import (
    average_scaling,
    bifractal_crossover,
    build_profile,
    decompose,
    legendre_spectrum,
    mfdfa,
    moment_fluctuation,
    monofractal_fit,
    partition_tau,
    segment_variances,
)
from src.surrogates import make_surrogate
from src.utils.data_generator import binomial_cascade, fgn, gaussian_white, superstat_series

CASCADE_P = 0.3
# dyadic windows aligned with the cascade boxes, linear detrending
CASCADE_CFG = MfdfaConfig(
    poly_order=1,
    profile_order=1,
    s_grid=tuple(2**k for k in range(8, 15)),
    fit_range=(2**8, 2**14),
)


def cascade_tau(z: np.ndarray, p: float = CASCADE_P) -> np.ndarray:
    return -np.log2(p**z + (1.0 - p) ** z)


def _tau_gap(result: ScalingResult) -> float:
    """Largest distance of tau(z) from the Gaussian line z/2 - 1."""
    return float(np.max(np.abs(result.tau - (result.z / 2.0 - 1.0))))


def _result(h, z=(-1.0, 0.0, 2.0)) -> ScalingResult:
    z = np.asarray(z, dtype=float)
    return ScalingResult(z=z, h=np.asarray(h, dtype=float), stderr=np.zeros(z.size), r2=np.ones(z.size))


def test_profile_first_and_second_order():
    x = RealSeries(values=[1.0, 2.0, 3.0])
    assert build_profile(x, 1).values.tolist() == [-1.0, -1.0, 0.0]
    assert np.allclose(build_profile(x, 2).values, [-1.0 / 3.0, -2.0 / 3.0, 0.0])


def test_segment_variances_vanish_on_polynomials():
    y = 0.5 * np.arange(64.0) + 3.0
    f2 = segment_variances(y, 16, poly_order=1)
    assert f2.shape == (4,)
    assert np.all(f2 < 1e-20)
    assert segment_variances(y, 16, poly_order=1, two_pass=True).shape == (8,)


def test_moment_fluctuation_zero_order_uses_log_average():
    f2 = np.array([1.0, 4.0])
    out = moment_fluctuation(f2, np.array([0.0, 2.0]))
    assert out[0] == pytest.approx(np.sqrt(2.0))
    assert out[1] == pytest.approx(np.sqrt(2.5))


def test_default_grids():
    z = np.asarray(default_z_grid())
    assert z[0] == -3.0 and z[-1] == 5.0 and 0.0 in z and 2.0 in z
    s = default_s_grid(2**16)
    assert s[0] == 8 and s[-1] == 11585


def test_config_validation():
    with pytest.raises(ValidationError):
        MfdfaConfig(z_grid=(-1.0, 0.0, 1.0))
    with pytest.raises(ValidationError):
        MfdfaConfig(poly_order=5, s_grid=(4, 8, 16))
    with pytest.raises(ValidationError):
        MfdfaConfig(s_grid=(8, 16, 32, 64), fit_range=(32, 16))


def test_white_noise_follows_gaussian_tau():
    result = mfdfa(gaussian_white(2**16, seed=1))
    assert _tau_gap(result) < 0.1
    assert result.at(2.0) == pytest.approx(0.5, abs=0.04)


def test_white_noise_tau_averaged_over_seeds():
    results = [mfdfa(gaussian_white(2**16, seed=100 + i)) for i in range(30)]
    assert _tau_gap(average_scaling(results)) < 0.05


def test_fgn_is_monofractal():
    for seed, hurst in enumerate((0.3, 0.5, 0.8)):
        result = mfdfa(fgn(2**16, hurst, seed=20 + seed))
        assert result.at(2.0) == pytest.approx(hurst, abs=0.04), hurst
        assert abs(result.h[0] - result.h[-1]) < 0.08, hurst


def test_shuffled_fgn_loses_memory():
    series = fgn(2**16, 0.8, seed=23)
    shuffled = make_surrogate(series, SurrogateSpec(kind="shuffle", seed=24))
    assert 0.45 <= mfdfa(shuffled).at(2.0) <= 0.55


def test_profile_orders_agree_on_hurst():
    for seed, hurst in enumerate((0.3, 0.8)):
        series = fgn(2**16, hurst, seed=25 + seed)
        double = mfdfa(series, MfdfaConfig(profile_order=2)).at(2.0)
        single = mfdfa(series, MfdfaConfig(profile_order=1)).at(2.0)
        assert abs(double - single) < 0.05, hurst


def test_short_series_reports_insufficient_scales():
    with pytest.raises(InsufficientScales):
        mfdfa(gaussian_white(20, seed=6))


def test_thread_count_does_not_change_result():
    series = gaussian_white(2**12, seed=3)
    one = mfdfa(series, threads=1)
    four = mfdfa(series, threads=4)
    assert np.array_equal(one.h, four.h)
    assert np.array_equal(one.stderr, four.stderr)


def test_partition_tau_matches_cascade_exactly():
    measure = binomial_cascade({"p": CASCADE_P, "levels": 12})
    z = np.asarray(default_z_grid())
    result = partition_tau(measure, z)
    assert np.allclose(result.tau, cascade_tau(z), atol=1e-9)


def test_cascade_spectrum_matches_partition_function():
    measure = binomial_cascade({"p": CASCADE_P, "levels": 16})
    z = np.asarray(default_z_grid())
    oracle = legendre_spectrum(partition_tau(measure, z))
    spectrum = legendre_spectrum(mfdfa(measure, CASCADE_CFG))
    assert np.max(np.abs(spectrum.alpha - oracle.alpha)) < 0.03
    assert spectrum.delta_alpha == pytest.approx(oracle.delta_alpha, abs=0.03)


def test_window_too_large():
    cfg = MfdfaConfig(poly_order=1, s_grid=(8, 16, 32, 600))
    with pytest.raises(WindowTooLarge):
        mfdfa(gaussian_white(1000, seed=4), cfg)


def test_insufficient_scales():
    cfg = MfdfaConfig(poly_order=1, s_grid=(8, 16, 32, 64, 128), fit_range=(16, 32))
    with pytest.raises(InsufficientScales):
        mfdfa(gaussian_white(2048, seed=5), cfg)


def test_legendre_spectrum_of_monofractal_collapses():
    z = np.asarray(default_z_grid())
    spectrum = legendre_spectrum(ScalingResult.from_tau(z, 0.7 * z - 1.0))
    assert np.allclose(spectrum.alpha, 0.7)
    assert np.allclose(spectrum.f_alpha, 1.0)
    assert spectrum.delta_alpha == pytest.approx(0.0, abs=1e-12)
    assert spectrum.hurst == pytest.approx(0.7)
    assert spectrum.support_dim == pytest.approx(1.0)


def test_legendre_spectrum_of_cascade():
    z = np.asarray(default_z_grid())
    spectrum = legendre_spectrum(ScalingResult.from_tau(z, cascade_tau(z)))
    assert spectrum.alpha_monotonic
    assert spectrum.support_dim == pytest.approx(1.0)
    assert spectrum.f_alpha.max() <= 1.0 + 1e-9


def test_decompose_weights():
    parts = decompose(_result([0.9, 0.7, 0.5]), _result([0.7, 0.6, 0.5]), _result([0.5, 0.5, 0.5]))
    assert parts.weight_pdf == pytest.approx(0.5)
    assert parts.weight_cor == pytest.approx(0.5)
    assert np.allclose(parts.h_cor, [0.2, 0.1, 0.0])
    assert np.allclose(parts.h_pdf_prime, [0.2, 0.1, 0.0])
    assert parts.null_deviation == pytest.approx(0.0)


def test_decompose_clips_weight_and_rejects_degenerate_input():
    parts = decompose(_result([0.6, 0.55, 0.5]), _result([0.9, 0.6, 0.5]), _result([0.5, 0.5, 0.5]))
    assert parts.weight_pdf == 1.0 and parts.weight_cor == 0.0
    with pytest.raises(ZeroDeltaH):
        decompose(_result([0.5, 0.5, 0.5]), _result([0.6, 0.5, 0.4]), _result([0.5, 0.5, 0.5]))
    with pytest.raises(GridMismatch):
        decompose(_result([0.9, 0.7, 0.5]), _result([0.7, 0.6, 0.5], z=(-2.0, 0.0, 2.0)), _result([0.5, 0.5, 0.5]))


def test_decomposition_of_correlated_and_iid_series():
    series = fgn(2**16, 0.8, seed=27)
    shuffled = make_surrogate(series, SurrogateSpec(kind="shuffle", seed=28))
    both = make_surrogate(series, SurrogateSpec(kind="shuffle_then_phase_randomize", seed=29))
    parts = decompose(mfdfa(series), mfdfa(shuffled), mfdfa(both))
    at_two = int(np.flatnonzero(parts.z == 2.0)[0])
    assert parts.h_cor[at_two] == pytest.approx(0.3, abs=0.06)
    assert parts.weight_pdf + parts.weight_cor == pytest.approx(1.0)
    assert parts.null_deviation < 0.1

    y, _ = superstat_series(2**16, {"gamma": 1.82, "delta": 2.0, "seed": 30})
    y_shf = make_surrogate(y, SurrogateSpec(kind="shuffle", seed=31))
    assert np.max(np.abs(mfdfa(y).h - mfdfa(y_shf).h)) < 0.05


def test_average_scaling_averages_tau():
    a, b = _result([0.9, 0.7, 0.5]), _result([0.7, 0.6, 0.3])
    avg = average_scaling([a, b])
    assert np.allclose(avg.tau[[0, 2]], ((a.tau + b.tau) / 2)[[0, 2]])
    assert avg.h[1] == pytest.approx(0.65)
    twice = average_scaling([a, a, b, b])
    assert np.allclose(twice.h, avg.h)
    assert np.allclose(average_scaling([a]).h, a.h)


def test_monofractal_fit_and_crossover():
    z = np.asarray(default_z_grid())
    linear = ScalingResult.from_tau(z, 0.5 * z - 1.0)
    assert monofractal_fit(linear) == pytest.approx(0.5)
    assert bifractal_crossover(linear) == pytest.approx(2.0)
    flat = ScalingResult.from_tau(z, 0.1 * z - 1.0)
    assert bifractal_crossover(flat) is None


def main():
    """Run all MF-DFA checks without pytest"""
    print("🧪 mfscan MF-DFA tests")
    print("=" * 50)
    tests = [v for k, v in globals().items() if k.startswith("test_") and callable(v)]
    for t in tests:
        t()
        print(f"✅ {t.__name__}")


if __name__ == "__main__":
    main()
