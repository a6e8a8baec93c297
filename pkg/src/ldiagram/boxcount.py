"""Box-counting dimension by bit interleaving.

Coordinates are quantized to k-bit integers and interleaved into one code per
point (x bit i at position 2i+1, y bit i at 2i). Points sharing the leading
2m bits share a box of side 2^(k-m), so after sorting the codes the number of
boxes at level m is one plus the number of adjacent codes that differ in those
bits.
"""

from typing import Optional, Tuple, Union

import numpy as np
import statsmodels.api as sm

from src.data_models.errors import DegenerateRange, EmptyInput, InsufficientScales, InvalidParameter, OutOfRange
from src.data_models.results import BoxCountCurve
from src.data_models.series import PointSet2D
from src.utils.app_logging import setup_logger

logger = setup_logger()

DEFAULT_BITS = 16
DEFAULT_FIT_RANGE = (2, 8)
SATURATION = 0.9

_SPREAD_STEPS = (
    (16, 0x0000FFFF0000FFFF),
    (8, 0x00FF00FF00FF00FF),
    (4, 0x0F0F0F0F0F0F0F0F),
    (2, 0x3333333333333333),
    (1, 0x5555555555555555),
)


def _check_bits(k: int, dims: int = 2) -> int:
    k = int(k)
    if not 1 <= k <= 31 or k * dims > 64:
        raise InvalidParameter(f"bits per axis must be within 1..31 and fit 64-bit codes, got {k}")
    return k


def _as_matrix(points: Union[PointSet2D, np.ndarray]) -> np.ndarray:
    if isinstance(points, PointSet2D):
        return points.as_array()
    arr = np.asarray(points, dtype=float)
    return arr.reshape(arr.shape[0], -1)


def quantize_points(points: Union[PointSet2D, np.ndarray], k: int = DEFAULT_BITS) -> np.ndarray:
    """Min-max scale each axis onto the integers 0..2^k - 1 (floor, max clipped in)."""
    k = _check_bits(k)
    coords = _as_matrix(points)
    if coords.shape[0] == 0:
        raise EmptyInput("no points to quantize")
    lo = coords.min(axis=0)
    span = coords.max(axis=0) - lo
    if np.any(span <= 0):
        raise DegenerateRange(f"axes {np.flatnonzero(span <= 0).tolist()} have zero range")
    top = 2**k - 1
    cells = np.floor((coords - lo) / span * 2.0**k)
    return np.clip(cells, 0, top).astype(np.uint64)


def _spread_bits(v: np.ndarray) -> np.ndarray:
    v = v & np.uint64(0x00000000FFFFFFFF)
    for shift, mask in _SPREAD_STEPS:
        v = (v | (v << np.uint64(shift))) & np.uint64(mask)
    return v


def interleave(grid_points: np.ndarray, k: int) -> np.ndarray:
    """One uint64 code per point, first axis most significant within each bit group."""
    grid = np.asarray(grid_points, dtype=np.uint64)
    dims = grid.shape[1]
    k = _check_bits(k, dims)
    if dims == 2:
        return (_spread_bits(grid[:, 0]) << np.uint64(1)) | _spread_bits(grid[:, 1])

    codes = np.zeros(grid.shape[0], dtype=np.uint64)
    one = np.uint64(1)
    for bit in range(k):
        for axis in range(dims):
            b = (grid[:, axis] >> np.uint64(bit)) & one
            codes |= b << np.uint64(bit * dims + dims - 1 - axis)
    return codes


def box_count(grid_points: np.ndarray, k: int = DEFAULT_BITS) -> BoxCountCurve:
    """Occupied boxes at every resolution m = 1..k from one scan of the sorted codes."""
    grid = np.asarray(grid_points)
    if grid.ndim != 2 or grid.shape[0] == 0:
        raise EmptyInput("box counting needs a non-empty (N, D) array of cells")
    dims = grid.shape[1]
    k = _check_bits(k, dims)
    if np.any(grid < 0) or np.any(grid > 2**k - 1):
        raise OutOfRange(f"cell coordinates must lie within 0..{2**k - 1}")

    codes = np.sort(interleave(grid.astype(np.uint64), k))
    changes = codes[1:] ^ codes[:-1]
    m = np.arange(1, k + 1)
    n_boxes = np.array(
        [1 + int(np.count_nonzero(changes >> np.uint64(dims * (k - level)))) for level in m],
        dtype=np.int64,
    )
    return BoxCountCurve(m=m, n_boxes=n_boxes, n_points=int(grid.shape[0]))


def fractal_dimension(curve: BoxCountCurve, fit_range: Optional[Tuple[int, int]] = None) -> BoxCountCurve:
    """Slope of log2 n_boxes against m.

    With the default range [2, 8], levels where boxes hold barely more than
    one point (n >= 0.9 N) are left out of the fit.
    """
    explicit = fit_range is not None
    lo, hi = fit_range if explicit else DEFAULT_FIT_RANGE
    in_range = (curve.m >= lo) & (curve.m <= hi)
    saturated = in_range & (curve.n_boxes >= SATURATION * curve.n_points)
    if np.any(saturated):
        levels = tuple(int(v) for v in curve.m[saturated])
        logger.warning(f"SaturatedRange: box counts near the point count at m={list(levels)}")
    else:
        levels = ()
    use = in_range if explicit else in_range & ~saturated
    if np.count_nonzero(use) < 3:
        raise InsufficientScales(f"only {int(np.count_nonzero(use))} usable resolutions in [{lo}, {hi}]")

    fit = sm.OLS(np.log2(curve.n_boxes[use].astype(float)), sm.add_constant(curve.m[use].astype(float))).fit()
    r2 = float(fit.rsquared) if np.isfinite(fit.rsquared) else 1.0
    used = curve.m[use]
    return BoxCountCurve(
        m=curve.m,
        n_boxes=curve.n_boxes,
        n_points=curve.n_points,
        d_f=float(fit.params[1]),
        fit_range=(int(used[0]), int(used[-1])),
        r2=r2,
        stderr=float(fit.bse[1]),
        saturated=levels,
    )


def box_dimension(
    points: Union[PointSet2D, np.ndarray],
    bits: int = DEFAULT_BITS,
    fit_range: Optional[Tuple[int, int]] = None,
) -> BoxCountCurve:
    """quantize -> interleave/count -> fit, for raw point coordinates."""
    grid = quantize_points(points, bits)
    return fractal_dimension(box_count(grid, bits), fit_range)
