"""Core data carriers: price records, real-valued series, intraday profiles, point sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.data_models.errors import InvalidParameter, LengthMismatch, UnknownMinute


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PricedRecord:
    """One observed price S(t) at (day, minute-of-day)."""

    day: int
    minute: int
    price: float


@dataclass(frozen=True, eq=False)
class RealSeries:
    """Ordered finite reals with optional (day, minute) calendar tags.

    Carries prices, returns, volatilities, signs and surrogates alike.
    Arrays are copied on construction and frozen.
    """

    values: np.ndarray
    days: Optional[np.ndarray] = None
    minutes: Optional[np.ndarray] = None
    meta: str = ""

    def __post_init__(self):
        values = _frozen_array(self.values, np.float64)
        if not np.all(np.isfinite(values)):
            raise InvalidParameter(f"series {self.meta!r} contains non-finite values")
        object.__setattr__(self, "values", values)

        if (self.days is None) != (self.minutes is None):
            raise InvalidParameter("calendar tags need both days and minutes")
        if self.days is not None:
            days = _frozen_array(self.days, np.int64)
            minutes = _frozen_array(self.minutes, np.int64)
            if days.size != values.size or minutes.size != values.size:
                raise LengthMismatch(
                    f"tags have {days.size}/{minutes.size} entries for {values.size} values"
                )
            object.__setattr__(self, "days", days)
            object.__setattr__(self, "minutes", minutes)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def has_tags(self) -> bool:
        return self.days is not None

    def derive(self, values, meta: Optional[str] = None, keep_tags: bool = False) -> "RealSeries":
        """New series from ``values``; tags are carried only when asked and lengths agree."""
        values = np.asarray(values, dtype=np.float64)
        carry = keep_tags and self.has_tags and values.size == self.values.size
        return RealSeries(
            values=values,
            days=self.days if carry else None,
            minutes=self.minutes if carry else None,
            meta=self.meta if meta is None else meta,
        )


@dataclass(frozen=True, eq=False)
class IntradayProfile:
    """Mean absolute return per minute-of-day (Λ of the U-shape adjustment).

    ``lam[j]`` belongs to ``minute_index[j]``; minutes are unique and sorted.
    """

    minute_index: np.ndarray
    lam: np.ndarray
    n_days: np.ndarray = field(default=None)

    def __post_init__(self):
        minutes = _frozen_array(self.minute_index, np.int64)
        lam = _frozen_array(self.lam, np.float64)
        if minutes.size != lam.size:
            raise LengthMismatch("profile minutes and lambda differ in length")
        if minutes.size > 1 and np.any(np.diff(minutes) <= 0):
            raise InvalidParameter("profile minutes must be unique and sorted")
        if np.any(lam <= 0):
            raise InvalidParameter("profile lambda must be strictly positive")
        object.__setattr__(self, "minute_index", minutes)
        object.__setattr__(self, "lam", lam)
        n_days = np.ones(minutes.size, dtype=np.int64) if self.n_days is None else self.n_days
        object.__setattr__(self, "n_days", _frozen_array(n_days, np.int64))

    def lookup(self, minutes: np.ndarray) -> np.ndarray:
        """Lambda at each minute in ``minutes``; unknown minutes raise UnknownMinute."""
        minutes = np.asarray(minutes, dtype=np.int64)
        pos = np.searchsorted(self.minute_index, minutes)
        pos_clipped = np.minimum(pos, self.minute_index.size - 1)
        known = (pos < self.minute_index.size) & (self.minute_index[pos_clipped] == minutes)
        if not np.all(known):
            missing = np.unique(minutes[~known])[:5].tolist()
            raise UnknownMinute(f"minutes not present in intraday profile: {missing}")
        return self.lam[pos_clipped]


@dataclass(frozen=True, eq=False)
class PointSet2D:
    """Lagged scatter (x_t, x_{t+lag}) of one series."""

    x: np.ndarray
    y: np.ndarray
    lag: int

    def __post_init__(self):
        x = _frozen_array(self.x, np.float64)
        y = _frozen_array(self.y, np.float64)
        if x.size != y.size:
            raise LengthMismatch(f"x has {x.size} points, y has {y.size}")
        if int(self.lag) < 1:
            raise InvalidParameter(f"lag must be >= 1, got {self.lag}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "lag", int(self.lag))

    def __len__(self) -> int:
        return int(self.x.size)

    def as_array(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])
