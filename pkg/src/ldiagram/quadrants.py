"""Lagged return maps (l-diagrams) and their quadrant occupation."""

import numpy as np

from src.data_models.errors import EmptyInput, InvalidParameter, LagTooLarge
from src.data_models.results import QuadrantStats
from src.data_models.series import PointSet2D, RealSeries

NEAR_AXIS_BAND = 0.05


def build_ldiagram(series: RealSeries, lag: int) -> PointSet2D:
    """Pairs (x_t, x_{t+lag}) for every t with both ends inside the series."""
    lag = int(lag)
    if lag < 1:
        raise InvalidParameter(f"lag must be >= 1, got {lag}")
    if len(series) <= lag:
        raise LagTooLarge(f"lag {lag} needs more than {lag} values, series has {len(series)}")
    values = series.values
    return PointSet2D(x=values[:-lag], y=values[lag:], lag=lag)


def near_axis_fraction(points: PointSet2D, scale: float, band: float = NEAR_AXIS_BAND) -> float:
    """Share of points closer than band * scale to either axis."""
    if len(points) == 0 or scale <= 0:
        return 0.0
    closest = np.minimum(np.abs(points.x), np.abs(points.y))
    return float(np.count_nonzero(closest < band * scale) / len(points))


def quadrant_stats(points: PointSet2D, original_series: RealSeries, band: float = NEAR_AXIS_BAND) -> QuadrantStats:
    """P1..P4 anticlockwise from (x>0, y>0); points on an axis are counted apart.

    The sign balance and the return total come from the whole original series.
    """
    if len(points) == 0:
        raise EmptyInput("l-diagram has no points")
    x, y = points.x, points.y
    on_axis = (x == 0) | (y == 0)
    counts = np.array([
        np.count_nonzero((x > 0) & (y > 0)),
        np.count_nonzero((x < 0) & (y > 0)),
        np.count_nonzero((x < 0) & (y < 0)),
        np.count_nonzero((x > 0) & (y < 0)),
    ])
    classified = int(counts.sum())
    if classified == 0:
        raise EmptyInput("every l-diagram point lies on an axis")
    probs = counts / classified

    values = original_series.values
    return QuadrantStats(
        p1=float(probs[0]),
        p2=float(probs[1]),
        p3=float(probs[2]),
        p4=float(probs[3]),
        n_pos_minus_neg=int(np.count_nonzero(values > 0) - np.count_nonzero(values < 0)),
        sum_returns=float(values.sum()),
        n_axis=int(np.count_nonzero(on_axis)),
        n_classified=classified,
        near_axis_fraction=near_axis_fraction(points, float(values.std()), band),
    )
