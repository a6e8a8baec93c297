#!/usr/bin/env python3
"""
Tests for price ingestion: log-returns, intraday profile, standardization
and the sign/magnitude split.
"""

import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.data_models.errors import (
    EmptyInput,
    LengthMismatch,
    MissingTags,
    NegativeMagnitude,
    NonPositivePrice,
    UnknownMinute,
    UnorderedRecords,
    ZeroProfileMinute,
    ZeroVariance,
)
from src.data_models.series import IntradayProfile, PricedRecord, RealSeries
from src.preprocess.ingest import (
    deseasonalize,
    intraday_profile,
    log_returns,
    preprocess_prices,
    recombine,
    split_sign_magnitude,
    standardize,
    volatility,
)
from src.utils.data_generator import synthetic_prices


def _two_days():
    return [
        PricedRecord(0, 0, 100.0), PricedRecord(0, 1, 101.0), PricedRecord(0, 2, 102.0),
        PricedRecord(1, 0, 110.0), PricedRecord(1, 1, 111.0),
    ]


def test_log_returns_skip_overnight():
    r = log_returns(_two_days())
    expected = np.log([101.0 / 100.0, 102.0 / 101.0, 111.0 / 110.0])
    assert np.allclose(r.values, expected, rtol=0, atol=1e-15)
    assert r.days.tolist() == [0, 0, 1]
    assert r.minutes.tolist() == [1, 2, 1]


def test_log_returns_bare_prices_form_one_session():
    r = log_returns([1.0, 2.0, 4.0])
    assert np.allclose(r.values, [np.log(2.0), np.log(2.0)])


def test_log_returns_rejects_bad_records():
    with pytest.raises(NonPositivePrice):
        log_returns([PricedRecord(0, 0, 100.0), PricedRecord(0, 1, 0.0)])
    with pytest.raises(UnorderedRecords):
        log_returns([PricedRecord(0, 0, 1.0), PricedRecord(0, 2, 1.0), PricedRecord(0, 1, 1.0)])
    with pytest.raises(EmptyInput):
        log_returns([PricedRecord(0, 0, 1.0)])


def test_intraday_profile_averages_over_trading_days():
    r = log_returns(_two_days())
    profile = intraday_profile(r)
    assert profile.minute_index.tolist() == [1, 2]
    assert profile.n_days.tolist() == [2, 1]
    assert profile.lam[0] == pytest.approx((abs(r.values[0]) + abs(r.values[2])) / 2)
    assert profile.lam[1] == pytest.approx(abs(r.values[1]))


def test_deseasonalize_divides_by_profile_and_drops_tags():
    r = log_returns(_two_days())
    adjusted = deseasonalize(r, intraday_profile(r))
    assert not adjusted.has_tags
    assert adjusted.values[1] == pytest.approx(1.0)


def test_missing_tags():
    with pytest.raises(MissingTags):
        intraday_profile(RealSeries(values=[0.1, -0.2]))


def test_profile_minute_with_only_zero_returns():
    r = RealSeries(values=[0.1, 0.0, -0.2, 0.0], days=[0, 0, 1, 1], minutes=[0, 1, 0, 1])
    with pytest.raises(ZeroProfileMinute):
        intraday_profile(r)


def test_deseasonalize_rejects_minutes_outside_profile():
    profile = IntradayProfile(minute_index=[0, 1], lam=[2.0, 2.0])
    r = RealSeries(values=[2.0, 4.0], days=[0, 0], minutes=[1, 7])
    with pytest.raises(UnknownMinute):
        deseasonalize(r, profile)
    adjusted = deseasonalize(RealSeries(values=[2.0, 4.0], days=[0, 0], minutes=[0, 1]),
                             IntradayProfile(minute_index=[0, 1], lam=[2.0, 4.0]))
    assert adjusted.values.tolist() == [1.0, 1.0]


def test_intraday_profile_ignores_day_order():
    r = log_returns(synthetic_prices(days=5, minutes_per_day=30, seed=12))
    relabel = np.array([3, 0, 4, 1, 2])
    new_days = relabel[r.days]
    order = np.argsort(new_days, kind="stable")
    shuffled = RealSeries(values=r.values[order], days=new_days[order], minutes=r.minutes[order])
    a, b = intraday_profile(r), intraday_profile(shuffled)
    assert np.array_equal(a.minute_index, b.minute_index)
    assert np.array_equal(a.n_days, b.n_days)
    assert np.allclose(a.lam, b.lam, rtol=1e-13, atol=0)


def test_constant_profile_only_rescales():
    rng = np.random.default_rng(13)
    x = RealSeries(values=rng.standard_normal(200), days=np.repeat(np.arange(4), 50),
                   minutes=np.tile(np.arange(50), 4))
    flat = IntradayProfile(minute_index=np.arange(50), lam=np.full(50, 0.37))
    assert np.allclose(standardize(deseasonalize(x, flat)).values, standardize(x).values, rtol=0, atol=1e-12)


def test_standardize_uses_population_sigma():
    out = standardize(RealSeries(values=[1.0, 2.0, 3.0, 4.0]))
    assert out.values.mean() == pytest.approx(0.0, abs=1e-15)
    assert np.sqrt(np.mean(out.values**2)) == pytest.approx(1.0)
    with pytest.raises(ZeroVariance):
        standardize(RealSeries(values=[2.0, 2.0, 2.0]))


def test_sign_magnitude_roundtrip_is_bit_exact():
    x = np.array([1.5, -0.25, 0.0, -0.0, 3e-300, -7.0])
    signs, magnitudes = split_sign_magnitude(RealSeries(values=x))
    assert set(np.unique(np.abs(signs.values))) <= {0.0, 1.0}
    assert np.all(magnitudes.values >= 0)
    back = recombine(signs, magnitudes).values
    assert np.array_equal(back, x)
    assert np.array_equal(np.signbit(back), np.signbit(x))


def test_recombine_checks_inputs():
    s = RealSeries(values=[1.0, -1.0])
    with pytest.raises(LengthMismatch):
        recombine(s, RealSeries(values=[1.0]))
    with pytest.raises(NegativeMagnitude):
        recombine(s, RealSeries(values=[1.0, -2.0]))


def test_volatility_is_absolute_value():
    assert volatility(RealSeries(values=[-2.0, 3.0])).values.tolist() == [2.0, 3.0]


def test_preprocess_prices_pipeline():
    records = synthetic_prices(days=5, minutes_per_day=60, seed=11)
    series = preprocess_prices(records)
    assert len(series) == 5 * 59
    assert series.values.mean() == pytest.approx(0.0, abs=1e-12)
    assert series.values.std() == pytest.approx(1.0)


def main():
    """Run all preprocessing checks without pytest"""
    print("🧪 mfscan preprocessing tests")
    print("=" * 50)
    tests = [v for k, v in globals().items() if k.startswith("test_") and callable(v)]
    for t in tests:
        t()
        print(f"✅ {t.__name__}")


if __name__ == "__main__":
    main()
