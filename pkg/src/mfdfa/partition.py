"""Brute-force partition function of a measure on dyadic boxes.

Z_z(s) = sum over boxes of mu_box^z scales as s^tau(z); the slope of
log2 Z against log2 s gives tau directly, with no detrending involved.
"""

from typing import Optional, Sequence, Union

import numpy as np
import statsmodels.api as sm

from src.data_models.errors import InsufficientScales, InvalidParameter
from src.data_models.results import ScalingResult
from src.data_models.series import RealSeries
from src.data_models.specs import default_z_grid


def partition_sums(measure: np.ndarray, z: np.ndarray, box_exponents: Sequence[int]) -> np.ndarray:
    """log2 Z_z for boxes of size 2^j; rows follow ``box_exponents``, columns follow z."""
    rows = []
    for j in box_exponents:
        boxes = measure.reshape(-1, 2**j).sum(axis=1)
        boxes = boxes[boxes > 0]
        rows.append(np.log2(np.sum(boxes[:, None] ** z[None, :], axis=0)))
    return np.vstack(rows)


def partition_tau(
    measure: Union[RealSeries, np.ndarray],
    z: Optional[Sequence[float]] = None,
    levels: Optional[Sequence[int]] = None,
) -> ScalingResult:
    """tau(z) of a nonnegative measure of length 2^L from dyadic box sums.

    ``levels`` are the box-size exponents j (box size 2^j) used in the fit;
    by default every j from 0 to L - 1.
    """
    values = measure.values if isinstance(measure, RealSeries) else np.asarray(measure, dtype=float)
    n = values.size
    if n < 2 or n & (n - 1):
        raise InvalidParameter(f"measure length must be a power of 2, got {n}")
    if np.any(values < 0):
        raise InvalidParameter("measure must be nonnegative")

    depth = n.bit_length() - 1
    box_exponents = list(range(depth)) if levels is None else [int(j) for j in levels]
    if len(box_exponents) < 2 or min(box_exponents) < 0 or max(box_exponents) > depth:
        raise InsufficientScales(f"need at least 2 box sizes within 2^0..2^{depth}")

    z_arr = np.asarray(default_z_grid() if z is None else z, dtype=float)
    mu = values / values.sum()
    log_z = partition_sums(mu, z_arr, box_exponents)
    exog = sm.add_constant(np.asarray(box_exponents, dtype=float))
    tau = np.array([sm.OLS(log_z[:, k], exog).fit().params[1] for k in range(z_arr.size)])
    return ScalingResult.from_tau(z_arr, tau, label="partition")
