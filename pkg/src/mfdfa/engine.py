"""Multifractal detrended fluctuation analysis.

profile -> F_z(s) table -> h(z) by log-log OLS -> Legendre spectrum, plus the
surrogate-based decomposition of the spectrum width.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np
import statsmodels.api as sm

from src.data_models.errors import (
    EmptyInput,
    GridMismatch,
    InsufficientScales,
    InvalidParameter,
    SingularFit,
    WindowTooLarge,
    ZeroDeltaH,
)
from src.data_models.results import Decomposition, FluctuationTable, MultifractalSpectrum, ScalingResult
from src.data_models.series import RealSeries
from src.data_models.specs import MfdfaConfig, default_fit_range
from src.utils.app_logging import setup_logger

logger = setup_logger()

F2_FLOOR = 1e-30
MIN_FIT_POINTS = 4


def build_profile(series: RealSeries, order: int = 1) -> RealSeries:
    """Cumulative sum of deviations from the mean, applied ``order`` times."""
    if len(series) < 2:
        raise EmptyInput(f"profile needs at least 2 values, got {len(series)}")
    if order not in (1, 2):
        raise InvalidParameter(f"profile order must be 1 or 2, got {order}")
    y = series.values
    for _ in range(order):
        y = np.cumsum(y - y.mean())
    return RealSeries(values=y, meta=f"{series.meta}:profile{order}")


def _detrend_basis(s: int, poly_order: int) -> np.ndarray:
    # orthonormal basis of polynomials up to poly_order on s equispaced points
    x = np.linspace(-1.0, 1.0, s)
    q, _ = np.linalg.qr(np.vander(x, poly_order + 1, increasing=True))
    return q


def segment_variances(y: np.ndarray, s: int, poly_order: int, two_pass: bool = False) -> np.ndarray:
    """Mean squared residual of the degree-``poly_order`` fit in each segment of size s."""
    n = y.size
    n_seg = n // s
    blocks = [y[: n_seg * s].reshape(n_seg, s)]
    if two_pass:
        blocks.append(y[n - n_seg * s:].reshape(n_seg, s))
    segments = np.vstack(blocks)

    q = _detrend_basis(s, poly_order)
    residual = segments - (segments @ q) @ q.T
    f2 = np.mean(residual**2, axis=1)

    floored = f2 < F2_FLOOR
    if np.any(floored):
        logger.warning(f"s={s}: {int(floored.sum())} segments with vanishing residual floored at {F2_FLOOR:g}")
        f2 = np.where(floored, F2_FLOOR, f2)
    return f2


def moment_fluctuation(f2: np.ndarray, z: np.ndarray) -> np.ndarray:
    """F_z for every z from the per-segment variances; z = 0 uses the log average."""
    z = np.asarray(z, dtype=float)
    out = np.empty(z.size)
    nonzero = z != 0
    zn = z[nonzero]
    out[nonzero] = np.mean(f2[:, None] ** (zn / 2.0), axis=0) ** (1.0 / zn)
    out[~nonzero] = np.exp(0.5 * np.mean(np.log(f2)))
    return out


def fluctuation_table(profile: RealSeries, cfg: MfdfaConfig, threads: int = 1) -> FluctuationTable:
    """F_z(s) over the configured window sizes and moment orders.

    Window sizes are processed independently, so the table does not depend
    on ``threads``.
    """
    n = len(profile)
    cfg = cfg.resolved(n)
    s_grid = np.asarray(cfg.s_grid, dtype=np.int64)
    z_grid = np.asarray(cfg.z_grid, dtype=float)

    if s_grid[-1] > n / 2:
        raise WindowTooLarge(f"largest window {int(s_grid[-1])} exceeds half the series length {n}")
    if s_grid[0] < cfg.poly_order + 1:
        raise SingularFit(f"window {int(s_grid[0])} is shorter than poly_order + 1 = {cfg.poly_order + 1}")

    two_pass = cfg.segmentation == "two_pass"
    y = profile.values

    def _row(s: int) -> np.ndarray:
        return moment_fluctuation(segment_variances(y, int(s), cfg.poly_order, two_pass), z_grid)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_row, s_grid))
    else:
        rows = [_row(s) for s in s_grid]

    n_segments = (n // s_grid) * (2 if two_pass else 1)
    logger.debug(f"fluctuation_table: n={n}, {s_grid.size} scales, {z_grid.size} moments, {cfg.segmentation}")
    return FluctuationTable(
        s=s_grid, z=z_grid, F=np.vstack(rows), n_segments=n_segments,
        profile_order=cfg.profile_order, n=n,
    )


def _fit_line(x: np.ndarray, y: np.ndarray):
    fit = sm.OLS(y, sm.add_constant(x)).fit()
    r2 = float(fit.rsquared)
    if not np.isfinite(r2):
        r2 = 1.0 if float(fit.ssr) == 0.0 else 0.0
    return float(fit.params[1]), float(fit.bse[1]), r2


def scaling_exponents(table: FluctuationTable, cfg: Optional[MfdfaConfig] = None) -> ScalingResult:
    """h(z) as the OLS slope of log2(F_z(s) / s^(profile_order - 1)) against log2 s."""
    cfg = cfg or MfdfaConfig(profile_order=table.profile_order)
    if cfg.fit_range is not None:
        lo, hi = cfg.fit_range
    else:
        n = table.n or int(table.s[-1]) * 4
        lo, hi = default_fit_range(tuple(int(s) for s in table.s), n, cfg.poly_order)

    mask = (table.s >= lo) & (table.s <= hi)
    if np.count_nonzero(mask) < MIN_FIT_POINTS:
        raise InsufficientScales(
            f"fit range [{lo}, {hi}] holds {int(np.count_nonzero(mask))} scales, need {MIN_FIT_POINTS}"
        )

    s = table.s[mask].astype(float)
    log_s = np.log2(s)
    shift = (table.profile_order - 1) * log_s
    h = np.empty(table.z.size)
    stderr = np.empty(table.z.size)
    r2 = np.empty(table.z.size)
    for j in range(table.z.size):
        h[j], stderr[j], r2[j] = _fit_line(log_s, np.log2(table.F[mask, j]) - shift)
    return ScalingResult(z=table.z.copy(), h=h, stderr=stderr, r2=r2)


def mfdfa(series: RealSeries, cfg: Optional[MfdfaConfig] = None, threads: int = 1) -> ScalingResult:
    """Profile, fluctuation table and exponents in one call."""
    cfg = (cfg or MfdfaConfig()).resolved(len(series))
    profile = build_profile(series, cfg.profile_order)
    table = fluctuation_table(profile, cfg, threads=threads)
    result = scaling_exponents(table, cfg)
    return ScalingResult(z=result.z, h=result.h, stderr=result.stderr, r2=result.r2, label=series.meta)


def _value_at(z: np.ndarray, values: np.ndarray, target: float) -> float:
    hit = np.flatnonzero(z == target)
    if hit.size:
        return float(values[hit[0]])
    return float(np.interp(target, z, values))


def tau_is_concave(result: ScalingResult) -> bool:
    """tau non-decreasing and concave up to the regression noise."""
    tau = result.tau
    tol = 2.0 * float(np.max(np.abs(result.z) * result.stderr)) + 1e-12
    slopes = np.diff(tau) / np.diff(result.z)
    return bool(np.all(np.diff(tau) >= -tol) and np.all(np.diff(slopes) * np.diff(result.z)[1:] <= tol))


def legendre_spectrum(result: ScalingResult) -> MultifractalSpectrum:
    """alpha = h + z h'(z), f = z (alpha - h) + 1, with h' from central differences."""
    z, h = result.z, result.h
    if z.size < 3:
        raise InvalidParameter(f"Legendre transform needs at least 3 moment orders, got {z.size}")

    dh = np.gradient(h, z)
    alpha = h + z * dh
    f_alpha = z * (alpha - h) + 1.0

    monotonic = bool(np.all(np.diff(alpha) <= 1e-12))
    if not monotonic:
        logger.warning(f"NonMonotonicAlpha: alpha(z) increases somewhere for {result.label or 'series'}")
    concave = tau_is_concave(result)
    if not concave:
        logger.warning(f"tau(z) of {result.label or 'series'} is not concave beyond the fit errors")

    return MultifractalSpectrum(
        z=z.copy(),
        alpha=alpha,
        f_alpha=f_alpha,
        delta_h=float(h[0] - h[-1]),
        delta_alpha=float(alpha.max() - alpha.min()),
        hurst=_value_at(z, h, 2.0),
        support_dim=_value_at(z, f_alpha, 0.0),
        alpha_monotonic=monotonic,
        tau_concave=concave,
    )


def delta_h(result: ScalingResult) -> float:
    return float(result.h[0] - result.h[-1])


def decompose(h_orig: ScalingResult, h_shf: ScalingResult, h_shf_rnd: ScalingResult) -> Decomposition:
    """Share of the spectrum width due to the distribution (shuffled) and to correlations."""
    if not (np.array_equal(h_orig.z, h_shf.z) and np.array_equal(h_orig.z, h_shf_rnd.z)):
        raise GridMismatch("original and surrogate results use different z grids")

    width = delta_h(h_orig)
    width_shf = delta_h(h_shf)
    if width == 0.0:
        raise ZeroDeltaH("original series has delta_h = 0; weights undefined")

    weight_pdf = width_shf / width
    if not 0.0 <= weight_pdf <= 1.0:
        logger.warning(f"weight_pdf {weight_pdf:.4f} outside [0, 1] clipped")
        weight_pdf = float(np.clip(weight_pdf, 0.0, 1.0))

    return Decomposition(
        z=h_orig.z.copy(),
        h_cor=h_orig.h - h_shf.h,
        h_pdf=h_shf.h.copy(),
        h_pdf_prime=h_shf.h - h_shf_rnd.h,
        weight_pdf=float(weight_pdf),
        weight_cor=float(1.0 - weight_pdf),
        delta_h=width,
        delta_h_shf=width_shf,
        null_deviation=float(np.max(np.abs(h_shf_rnd.h - 0.5))),
    )


def average_scaling(results: Sequence[ScalingResult], label: str = "average") -> ScalingResult:
    """Average tau(z) across series and read h back from the mean tau."""
    if not results:
        raise EmptyInput("nothing to average")
    z = results[0].z
    if any(not np.array_equal(r.z, z) for r in results):
        raise GridMismatch("results to average use different z grids")

    mean_tau = np.mean(np.vstack([r.tau for r in results]), axis=0)
    mean_h = np.mean(np.vstack([r.h for r in results]), axis=0)
    h = np.where(z != 0, (mean_tau + 1.0) / np.where(z != 0, z, 1.0), mean_h)
    return ScalingResult(
        z=z.copy(),
        h=h,
        stderr=np.mean(np.vstack([r.stderr for r in results]), axis=0),
        r2=np.mean(np.vstack([r.r2 for r in results]), axis=0),
        label=label,
    )


def monofractal_fit(result: ScalingResult) -> float:
    """Single H minimizing the squared distance between tau(z) and H z - 1."""
    fit = sm.OLS(result.tau + 1.0, result.z).fit()
    return float(fit.params[0])


def bifractal_crossover(result: ScalingResult) -> Optional[float]:
    """First z > 0 where tau(z) reaches 0, linearly interpolated; None if it never does."""
    z, tau = result.z, result.tau
    above = np.flatnonzero((z > 0) & (tau >= 0))
    if above.size == 0:
        return None
    i = int(above[0])
    if i == 0 or tau[i] == 0:
        return float(z[i])
    z0, z1, t0, t1 = z[i - 1], z[i], tau[i - 1], tau[i]
    return float(z0 + (0.0 - t0) * (z1 - z0) / (t1 - t0))
