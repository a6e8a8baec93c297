"""Price ingestion: log-returns, intraday U-shape removal, standardization, sign/magnitude split."""

from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.data_models.errors import (
    EmptyInput,
    LengthMismatch,
    MissingTags,
    NegativeMagnitude,
    NonPositivePrice,
    UnorderedRecords,
    ZeroProfileMinute,
    ZeroVariance,
)
from src.data_models.series import IntradayProfile, PricedRecord, RealSeries
from src.utils.app_logging import setup_logger

logger = setup_logger()

PriceInput = Union[Sequence[PricedRecord], Sequence[float]]


def _record_arrays(prices: PriceInput) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split records into day, minute and price arrays. Bare numbers form one session."""
    items = list(prices)
    if items and all(isinstance(rec, PricedRecord) for rec in items):
        days = np.fromiter((rec.day for rec in items), dtype=np.int64, count=len(items))
        minutes = np.fromiter((rec.minute for rec in items), dtype=np.int64, count=len(items))
        values = np.fromiter((rec.price for rec in items), dtype=np.float64, count=len(items))
        return days, minutes, values
    values = np.asarray(items, dtype=np.float64).reshape(-1)
    return np.zeros(values.size, dtype=np.int64), np.arange(values.size, dtype=np.int64), values


def log_returns(prices: PriceInput, meta: str = "returns") -> RealSeries:
    """ln S(t+1) - ln S(t) within each trading day; overnight returns are dropped.

    Each return carries the (day, minute) tag of the later price.
    """
    days, minutes, values = _record_arrays(prices)
    if values.size < 2:
        raise EmptyInput(f"need at least 2 prices, got {values.size}")
    bad = np.flatnonzero(~(np.isfinite(values) & (values > 0)))
    if bad.size:
        raise NonPositivePrice(f"prices must be positive and finite (first offending index {int(bad[0])})")

    day_step = np.diff(days)
    same_day = day_step == 0
    if np.any(day_step < 0) or np.any(np.diff(minutes)[same_day] <= 0):
        raise UnorderedRecords("records must be sorted by day and strictly by minute within a day")

    returns = np.diff(np.log(values))[same_day]
    if returns.size == 0:
        raise EmptyInput("no intraday returns: every day holds a single price")
    dropped = int(np.count_nonzero(~same_day))
    if dropped:
        logger.debug(f"log_returns: dropped {dropped} overnight returns")
    return RealSeries(values=returns, days=days[1:][same_day], minutes=minutes[1:][same_day], meta=meta)


def intraday_profile(returns: RealSeries) -> IntradayProfile:
    """Mean |r| per minute-of-day, averaged over the days on which that minute traded."""
    if not returns.has_tags:
        raise MissingTags(f"series {returns.meta!r} has no (day, minute) tags")
    if len(returns) == 0:
        raise EmptyInput("cannot build an intraday profile from an empty series")

    frame = pd.DataFrame({"day": returns.days, "minute": returns.minutes, "abs_r": np.abs(returns.values)})
    frame = frame.sort_values(["minute", "day"], kind="mergesort")
    grouped = frame.groupby("minute", sort=True).agg(total=("abs_r", "sum"), n_days=("day", "nunique"))
    lam = grouped["total"].to_numpy() / grouped["n_days"].to_numpy()

    zero = grouped.index.to_numpy()[lam <= 0]
    if zero.size:
        raise ZeroProfileMinute(f"every return is exactly 0 at minutes {zero[:5].tolist()}")
    logger.debug(f"intraday_profile: {lam.size} minutes over {frame['day'].nunique()} days")
    return IntradayProfile(minute_index=grouped.index.to_numpy(), lam=lam, n_days=grouped["n_days"].to_numpy())


def deseasonalize(returns: RealSeries, profile: IntradayProfile) -> RealSeries:
    """Divide each return by Lambda at its minute. The result has no calendar tags."""
    if not returns.has_tags:
        raise MissingTags(f"series {returns.meta!r} has no (day, minute) tags")
    lam = profile.lookup(returns.minutes)
    return RealSeries(values=returns.values / lam, meta=returns.meta)


def standardize(series: RealSeries) -> RealSeries:
    """Zero mean, unit population standard deviation."""
    if len(series) < 2:
        raise EmptyInput(f"need at least 2 values to standardize, got {len(series)}")
    centered = series.values - series.values.mean()
    sigma = float(np.sqrt(np.mean(centered**2)))
    if sigma == 0.0:
        raise ZeroVariance(f"series {series.meta!r} is constant")
    return series.derive(centered / sigma, keep_tags=True)


def split_sign_magnitude(returns: RealSeries) -> Tuple[RealSeries, RealSeries]:
    """s(t) in {-1, 0, +1} and v(t) = |r(t)|; s * v gives back r bit for bit."""
    x = returns.values
    # copysign keeps the sign bit of -0.0 so the product restores it too
    signs = np.copysign(np.sign(x), x)
    magnitudes = np.abs(x)
    return (
        returns.derive(signs, meta=f"{returns.meta}:sign", keep_tags=True),
        returns.derive(magnitudes, meta=f"{returns.meta}:magnitude", keep_tags=True),
    )


def recombine(signs: RealSeries, magnitudes: RealSeries) -> RealSeries:
    """u(t) = s(t) * v(t)."""
    if len(signs) != len(magnitudes):
        raise LengthMismatch(f"{len(signs)} signs vs {len(magnitudes)} magnitudes")
    if np.any(magnitudes.values < 0):
        raise NegativeMagnitude(f"series {magnitudes.meta!r} has negative entries")
    return signs.derive(signs.values * magnitudes.values, meta=f"{signs.meta}*{magnitudes.meta}", keep_tags=True)


def volatility(series: RealSeries) -> RealSeries:
    """Instantaneous volatility v(t) = |r(t)|."""
    return series.derive(np.abs(series.values), meta=f"{series.meta}:volatility", keep_tags=True)


def preprocess_prices(prices: PriceInput, meta: str = "returns") -> RealSeries:
    """log-returns, divided by the intraday profile, then standardized."""
    raw = log_returns(prices, meta=meta)
    profile = intraday_profile(raw)
    adjusted = deseasonalize(raw, profile)
    logger.info(f"preprocess {meta}: {len(raw)} returns, {profile.minute_index.size} profile minutes")
    return standardize(adjusted)
