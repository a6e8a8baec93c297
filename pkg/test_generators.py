#!/usr/bin/env python3
"""
Tests for the synthetic data generator: noises, cascades, superstatistical
series, F-distribution samples and point sets.
"""

import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.data_models.errors import DomainError, InvalidH, InvalidParameter, InvalidSpec
from src.utils.data_generator import (
    binomial_cascade,
    fgn,
    fgn_autocovariance,
    gamma_from_q,
    gaussian_white,
    q_from_gamma,
    sample_f_distribution,
    sierpinski_points,
    superstat_series,
    synthetic_prices,
)


def test_same_seed_same_draws():
    assert np.array_equal(gaussian_white(100, 5).values, gaussian_white(100, 5).values)
    assert not np.array_equal(gaussian_white(100, 5).values, gaussian_white(100, 6).values)


def test_fgn_autocovariance_of_white_noise():
    assert np.allclose(fgn_autocovariance(0.5, np.arange(3)), [1.0, 0.0, 0.0])


def test_fgn_variance_and_validation():
    x = fgn(2**14, 0.8, seed=1).values
    assert x.size == 2**14
    assert x.var() == pytest.approx(1.0, abs=0.15)
    lag1 = np.corrcoef(x[:-1], x[1:])[0, 1]
    assert lag1 == pytest.approx(fgn_autocovariance(0.8, np.array([1]))[0], abs=0.05)
    with pytest.raises(InvalidH):
        fgn(1024, 1.0, seed=1)
    with pytest.raises(InvalidParameter):
        fgn(1000, 0.7, seed=1)


def test_binomial_cascade_is_a_probability_measure():
    mu = binomial_cascade({"p": 0.3, "levels": 10}).values
    assert mu.size == 2**10
    assert mu.sum() == pytest.approx(1.0)
    assert mu.max() == pytest.approx(0.7**10)
    with pytest.raises(InvalidSpec):
        binomial_cascade({"p": 1.2, "levels": 10})


def test_superstat_series_is_heavy_tailed():
    y, sigma = superstat_series(2**16, {"gamma": 1.82, "delta": 2.0, "seed": 3})
    assert len(y) == len(sigma) == 2**16
    assert np.all(sigma.values > 0)
    v = y.values
    kurtosis = np.mean((v - v.mean()) ** 4) / v.var() ** 2
    assert kurtosis > 4.0


def test_q_gamma_mapping():
    q = q_from_gamma(1.82)
    assert q == pytest.approx(1.0 + 2.0 / 6.64)
    assert gamma_from_q(q) == pytest.approx(1.82)
    with pytest.raises(DomainError):
        gamma_from_q(1.8)
    with pytest.raises(DomainError):
        q_from_gamma(-2.0)


@pytest.mark.parametrize("q", [1.0, 1.08, 0.9])
def test_f_distribution_sample_mean(q):
    theta, phi = 0.32, 1.83
    a = phi + 1.0
    if q > 1.0:
        b = 1.0 / (q - 1.0) - a
        expected = theta / (q - 1.0) * a / (b - 1.0)
    elif q == 1.0:
        expected = theta * a
    else:
        b = 1.0 / (1.0 - q) + 1.0
        expected = theta / (1.0 - q) * a / (a + b)
    sample = sample_f_distribution(2**16, theta, phi, q, seed=4).values
    assert np.all(sample > 0)
    assert sample.mean() == pytest.approx(expected, rel=0.05)


def test_sierpinski_points_stay_in_triangle():
    pts = sierpinski_points(5000, seed=5)
    assert pts.shape == (5000, 2)
    assert np.all(pts >= 0) and np.all(pts.sum(axis=1) <= 1.0 + 1e-12)


def test_synthetic_prices_shape():
    records = synthetic_prices(days=3, minutes_per_day=10, seed=6)
    assert len(records) == 30
    assert all(r.price > 0 for r in records)
    assert [r.minute for r in records[:10]] == list(range(10))


def main():
    """Run all generator checks without pytest"""
    print("🧪 mfscan generator tests")
    print("=" * 50)
    test_same_seed_same_draws()
    test_fgn_autocovariance_of_white_noise()
    test_fgn_variance_and_validation()
    test_binomial_cascade_is_a_probability_measure()
    test_superstat_series_is_heavy_tailed()
    test_q_gamma_mapping()
    for q in (1.0, 1.08, 0.9):
        test_f_distribution_sample_mean(q)
    test_sierpinski_points_stay_in_triangle()
    test_synthetic_prices_shape()
    print("✅ all generator checks passed")


if __name__ == "__main__":
    main()
