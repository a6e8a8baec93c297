#!/usr/bin/env python3
"""
Tests for shuffled and phase-randomized surrogates.
"""

import os
import sys

import numpy as np
import pytest
from scipy.stats import kurtosis

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.data_models.errors import TooShort
from src.data_models.series import RealSeries
from src.data_models.specs import SurrogateKind, SurrogateSpec
from src.mfdfa import mfdfa
from src.surrogates import make_surrogate, phase_randomize, shuffle, sign_magnitude_surrogates, surrogate_batch
from src.utils.data_generator import fgn, superstat_series
from src.utils.rng import derive_seed, make_rng


def _amplitudes(values: np.ndarray) -> np.ndarray:
    return np.abs(np.fft.fft(values))


def test_shuffle_is_a_seeded_permutation():
    x = fgn(1024, 0.7, seed=1)
    a = shuffle(x, 42)
    assert np.array_equal(np.sort(a.values), np.sort(x.values))
    assert np.array_equal(a.values, shuffle(x, 42).values)
    assert not np.array_equal(a.values, shuffle(x, 43).values)


@pytest.mark.parametrize("n", [1024, 1023])
def test_phase_randomize_keeps_periodogram_and_mean(n):
    x = fgn(1024, 0.8, seed=2).values[:n]
    series = RealSeries(values=x)
    out = phase_randomize(series, 7).values
    assert out.size == n
    amp_in, amp_out = _amplitudes(x), _amplitudes(out)
    assert np.allclose(amp_out, amp_in, rtol=1e-8, atol=1e-8 * amp_in.max())
    assert out.mean() == pytest.approx(x.mean(), abs=1e-12)
    assert not np.allclose(out, x)


def test_phase_randomize_needs_four_values():
    with pytest.raises(TooShort):
        phase_randomize(RealSeries(values=[1.0, 2.0, 3.0]), 0)


def test_combined_kind_randomizes_the_shuffled_series():
    x = fgn(512, 0.8, seed=3)
    both = make_surrogate(x, SurrogateSpec(kind=SurrogateKind.shuffle_then_phase_randomize, seed=9))
    shuffled = shuffle(x, make_rng(9))
    amp = _amplitudes(shuffled.values)
    assert np.allclose(_amplitudes(both.values), amp, rtol=1e-8, atol=1e-8 * amp.max())


def test_phase_randomization_removes_heavy_tails():
    y, _ = superstat_series(2**16, {"gamma": 1.82, "delta": 2.0, "seed": 11})
    assert kurtosis(y.values) > 1.0
    randomized = make_surrogate(y, SurrogateSpec(kind=SurrogateKind.phase_randomize, seed=12))
    assert kurtosis(randomized.values) < 0.2

    both = make_surrogate(y, SurrogateSpec(kind=SurrogateKind.shuffle_then_phase_randomize, seed=13))
    result = mfdfa(both)
    assert np.max(np.abs(result.tau - (result.z / 2.0 - 1.0))) < 0.1


def test_batch_uses_counter_seeds_and_ignores_threads():
    x = fgn(256, 0.6, seed=4)
    batch = surrogate_batch(x, "phaserand", base_seed=100, count=3)
    threaded = surrogate_batch(x, SurrogateKind.phase_randomize, base_seed=100, count=3, threads=3)
    for i, (a, b) in enumerate(zip(batch, threaded)):
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.values, phase_randomize(x, derive_seed(100, i)).values)


def test_derive_seed_wraps():
    assert derive_seed(2**64 - 1, 1) == 0


def test_sign_magnitude_surrogates_keep_signs():
    y, _ = superstat_series(2048, {"seed": 5})
    out = sign_magnitude_surrogates(y, seed=6)
    assert set(out) == {"u_shuffle", "u_phaserand", "u_both"}
    for u in out.values():
        assert len(u) == len(y)
        nonzero = u.values != 0
        assert np.array_equal(np.sign(u.values[nonzero]), np.sign(y.values[nonzero]))
    assert np.allclose(np.sort(np.abs(out["u_shuffle"].values)), np.sort(np.abs(y.values)))


def main():
    """Run all surrogate checks without pytest"""
    print("🧪 mfscan surrogate tests")
    print("=" * 50)
    test_shuffle_is_a_seeded_permutation()
    for n in (1024, 1023):
        test_phase_randomize_keeps_periodogram_and_mean(n)
    test_phase_randomize_needs_four_values()
    test_combined_kind_randomizes_the_shuffled_series()
    test_batch_uses_counter_seeds_and_ignores_threads()
    test_derive_seed_wraps()
    test_sign_magnitude_surrogates_keep_signs()
    print("✅ all surrogate checks passed")


if __name__ == "__main__":
    main()
