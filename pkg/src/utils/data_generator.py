"""
Synthetic data generator for the multifractal toolkit.
Series with known scaling or distributional properties, point sets with known
box dimension, and intraday price files for the preprocessing chain.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError
from scipy.signal import lfilter

# Allow running this file directly (python src/utils/data_generator.py)
# by ensuring the project root is on sys.path so `import src...` works.
import sys
if __package__ is None or __package__ == "":
    project_root = str(Path(__file__).resolve().parents[2])
    if project_root not in sys.path:
        sys.path.insert(0, project_root)

from src.data_models.errors import DomainError, InvalidH, InvalidParameter, InvalidSpec
from src.data_models.series import PricedRecord, RealSeries
from src.data_models.specs import CascadeSpec, GammaVarianceSpec
from src.utils.app_logging import setup_logger
from src.utils.rng import SeedLike, derive_seed, make_rng

logger = setup_logger()

SpecT = TypeVar("SpecT", bound=BaseModel)

SIERPINSKI_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
CHAOS_BURN_IN = 64
MAX_CASCADE_LEVELS = 26


def _coerce(spec: Union[SpecT, dict], model: Type[SpecT]) -> SpecT:
    if isinstance(spec, model):
        return spec
    try:
        return model.model_validate(spec)
    except ValidationError as e:
        raise InvalidSpec(f"invalid {model.__name__}: {e.errors()[0]['msg']}") from e


def _check_length(n: int) -> int:
    n = int(n)
    if n < 1:
        raise InvalidParameter(f"length must be >= 1, got {n}")
    return n


# ========================
# Series generators
# ========================
def gaussian_white(n: int, seed: SeedLike) -> RealSeries:
    """iid standard normal draws."""
    n = _check_length(n)
    return RealSeries(values=make_rng(seed).standard_normal(n), meta="white")


def fgn_autocovariance(hurst: float, lags: np.ndarray) -> np.ndarray:
    k = np.abs(np.asarray(lags, dtype=float))
    return 0.5 * (np.abs(k + 1) ** (2 * hurst) - 2 * k ** (2 * hurst) + np.abs(k - 1) ** (2 * hurst))


def fgn(n: int, hurst: float, seed: SeedLike) -> RealSeries:
    """Unit-variance fractional Gaussian noise by circulant embedding (Davies-Harte)."""
    n = _check_length(n)
    if n & (n - 1):
        raise InvalidParameter(f"fGn length must be a power of 2, got {n}")
    if not 0.0 < hurst < 1.0:
        raise InvalidH(f"Hurst exponent must lie in (0, 1), got {hurst}")

    gamma = fgn_autocovariance(hurst, np.arange(n + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    eigen = np.fft.fft(row).real
    if eigen.min() < -1e-10 * eigen.max():
        raise InvalidH(f"circulant embedding is not nonnegative for H={hurst}, n={n}")
    eigen = np.clip(eigen, 0.0, None)

    m = row.size
    rng = make_rng(seed)
    noise = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    sample = np.fft.fft(np.sqrt(eigen / m) * noise).real[:n]
    return RealSeries(values=sample, meta=f"fgn_H{hurst:g}")


def binomial_cascade(spec: Union[CascadeSpec, dict]) -> RealSeries:
    """2^levels cell masses of the deterministic binomial measure (left share p)."""
    spec = _coerce(spec, CascadeSpec)
    masses = np.ones(1)
    for _ in range(spec.levels):
        masses = np.stack([masses * spec.p, masses * (1.0 - spec.p)], axis=1).ravel()
    return RealSeries(values=masses, meta=f"cascade_p{spec.p:g}_L{spec.levels}")


def superstat_series(n: int, spec: Union[GammaVarianceSpec, dict]) -> Tuple[RealSeries, RealSeries]:
    """y(t) = sigma(t) w(t) with sigma^-2 ~ Gamma(shape gamma + 1, scale delta).

    Returns (y, sigma). The inverse variances are drawn before the Gaussian part.
    """
    n = _check_length(n)
    spec = _coerce(spec, GammaVarianceSpec)
    rng = make_rng(spec.seed)
    inverse_variance = rng.gamma(shape=spec.gamma + 1.0, scale=spec.delta, size=n)
    sigma = inverse_variance**-0.5
    omega = rng.standard_normal(n)
    label = f"superstat_g{spec.gamma:g}_d{spec.delta:g}"
    return RealSeries(values=sigma * omega, meta=label), RealSeries(values=sigma, meta=f"{label}:sigma")


def q_from_gamma(gamma: float) -> float:
    """q = 1 + 2 / (3 + 2 gamma)."""
    if not gamma > -1.5:
        raise DomainError(f"gamma must exceed -3/2, got {gamma}")
    return 1.0 + 2.0 / (3.0 + 2.0 * gamma)


def gamma_from_q(q: float) -> float:
    """Inverse of q_from_gamma on q in (1, 5/3)."""
    if not 1.0 < q < 5.0 / 3.0:
        raise DomainError(f"q must lie in (1, 5/3), got {q}")
    return 1.0 / (q - 1.0) - 1.5


# ========================
# Samplers
# ========================
def sample_f_distribution(n: int, theta: float, phi: float, q: float, seed: SeedLike) -> RealSeries:
    """Draws from the density proportional to (v/theta)^phi [1 - (1-q) v/theta]^(1/(1-q)).

    q > 1 is a scaled beta-prime law, q = 1 a Gamma law and q < 1 a scaled Beta law.
    """
    n = _check_length(n)
    if theta <= 0 or phi <= -1:
        raise DomainError(f"need theta > 0 and phi > -1, got theta={theta}, phi={phi}")
    rng = make_rng(seed)
    a = phi + 1.0
    if q > 1.0:
        b = 1.0 / (q - 1.0) - a
        if b <= 0:
            raise DomainError(f"density is not normalizable for phi={phi}, q={q}")
        u = rng.beta(a, b, size=n)
        values = theta / (q - 1.0) * u / (1.0 - u)
    elif q == 1.0:
        values = rng.gamma(shape=a, scale=theta, size=n)
    else:
        values = theta / (1.0 - q) * rng.beta(a, 1.0 / (1.0 - q) + 1.0, size=n)
    return RealSeries(values=values, meta=f"fdist_t{theta:g}_p{phi:g}_q{q:g}")


def sierpinski_points(n: int, seed: SeedLike) -> np.ndarray:
    """Chaos-game points on the Sierpinski triangle with vertices (0,0), (1,0), (0,1)."""
    n = _check_length(n)
    picks = make_rng(seed).integers(0, 3, size=n + CHAOS_BURN_IN)
    targets = SIERPINSKI_VERTICES[picks]
    # p_t = (p_{t-1} + v_t) / 2
    path = lfilter([0.5], [1.0, -0.5], targets, axis=0)
    return path[CHAOS_BURN_IN:]


def uniform_square(n: int, seed: SeedLike) -> np.ndarray:
    return make_rng(seed).random((_check_length(n), 2))


def line_points(n: int, seed: SeedLike) -> np.ndarray:
    """Uniform points on the segment from (0, 0.25) to (1, 0.75)."""
    t = make_rng(seed).random(_check_length(n))
    return np.column_stack([t, 0.25 + 0.5 * t])


def synthetic_prices(
    days: int,
    minutes_per_day: int,
    seed: SeedLike,
    open_boost: float = 3.0,
    start_price: float = 100.0,
) -> List[PricedRecord]:
    """Intraday price paths with a U-shaped volatility profile across the session."""
    if days < 1 or minutes_per_day < 2:
        raise InvalidParameter("need at least one day of two minutes")
    rng = make_rng(seed)
    minute = np.arange(minutes_per_day)
    position = (minute - (minutes_per_day - 1) / 2.0) / ((minutes_per_day - 1) / 2.0)
    profile = 1e-3 * (1.0 + (open_boost - 1.0) * position**2)

    records: List[PricedRecord] = []
    log_price = np.log(start_price)
    for day in range(days):
        log_path = log_price + np.concatenate([[0.0], np.cumsum(profile[1:] * rng.standard_normal(minutes_per_day - 1))])
        records.extend(
            PricedRecord(day=day, minute=int(m), price=float(p)) for m, p in zip(minute, np.exp(log_path))
        )
        log_price = log_path[-1] + 5e-3 * rng.standard_normal()
    return records


def generate_sample_inputs(out_dir: Union[str, Path], seed: int, n: int = 2**14) -> Dict[str, Path]:
    """Write a small set of example inputs used by the README walkthrough and setup."""
    from src.tools.series_io import write_prices, write_series

    out = Path(out_dir)
    y, _ = superstat_series(n, GammaVarianceSpec(seed=derive_seed(seed, 2)))
    files = {
        "white": write_series(gaussian_white(n, derive_seed(seed, 0)), out / "white.csv"),
        "fgn_H0.8": write_series(fgn(n, 0.8, derive_seed(seed, 1)), out / "fgn_H0.8.csv"),
        "superstat": write_series(y, out / "superstat.csv"),
        "prices": write_prices(synthetic_prices(20, 390, derive_seed(seed, 3)), out / "prices.csv"),
    }
    for name, path in files.items():
        logger.info(f"sample input {name}: {path}")
    return files


if __name__ == "__main__":
    from src.configs.config import get_settings

    generate_sample_inputs("data/samples", get_settings().seed)
