"""Shuffled and phase-randomized surrogates with counter-seeded batches."""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Union

import numpy as np
from scipy import fft

from src.data_models.errors import EmptyInput, InvalidParameter, TooShort
from src.data_models.series import RealSeries
from src.data_models.specs import SurrogateKind, SurrogateSpec
from src.preprocess.ingest import recombine, split_sign_magnitude
from src.utils.app_logging import setup_logger
from src.utils.rng import SeedLike, derive_seed, make_rng

logger = setup_logger()

IMAG_RESIDUE_TOL = 1e-9


def shuffle(series: RealSeries, seed: SeedLike) -> RealSeries:
    """Uniform random permutation of the values."""
    if len(series) < 2:
        raise EmptyInput(f"shuffle needs at least 2 values, got {len(series)}")
    rng = make_rng(seed)
    return series.derive(rng.permutation(series.values), meta=f"{series.meta}:shuffle")


def randomized_spectrum(values: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Full DFT of ``values`` with every phase but DC and Nyquist replaced.

    Phase theta at f = 1..ceil(N/2)-1 and -theta at N-f, so the spectrum stays
    Hermitian and the inverse transform is real.
    """
    n = values.size
    spectrum = fft.fft(values)
    amplitude = np.abs(spectrum)
    half = (n + 1) // 2
    theta = rng.uniform(0.0, 2.0 * np.pi, size=half - 1)

    out = np.empty(n, dtype=np.complex128)
    out[0] = spectrum[0].real
    out[1:half] = amplitude[1:half] * np.exp(1j * theta)
    out[n - half + 1:][::-1] = np.conj(out[1:half])
    if n % 2 == 0:
        out[n // 2] = spectrum[n // 2].real
    return out


def phase_randomize(series: RealSeries, seed: SeedLike) -> RealSeries:
    """Same periodogram and mean, new uniform phases."""
    n = len(series)
    if n < 4:
        raise TooShort(f"phase randomization needs at least 4 values, got {n}")
    rng = make_rng(seed)
    inverse = fft.ifft(randomized_spectrum(series.values, rng))

    scale = float(np.max(np.abs(inverse.real))) or 1.0
    residue = float(np.max(np.abs(inverse.imag)))
    if residue > IMAG_RESIDUE_TOL * scale:
        logger.warning(f"phase_randomize: imaginary residue {residue:.3e} above tolerance")
    return series.derive(inverse.real, meta=f"{series.meta}:phaserand")


def make_surrogate(series: RealSeries, spec: SurrogateSpec) -> RealSeries:
    """Dispatch on ``spec.kind``; the combined kind shuffles first, then randomizes phases."""
    if spec.kind == SurrogateKind.shuffle:
        return shuffle(series, spec.seed)
    if spec.kind == SurrogateKind.phase_randomize:
        return phase_randomize(series, spec.seed)
    if spec.kind == SurrogateKind.shuffle_then_phase_randomize:
        rng = make_rng(spec.seed)
        shuffled = shuffle(series, rng)
        combined = phase_randomize(shuffled, rng)
        return combined.derive(combined.values, meta=f"{series.meta}:both")
    raise InvalidParameter(f"unknown surrogate kind {spec.kind!r}")


def surrogate_batch(
    series: RealSeries,
    kind: Union[SurrogateKind, str],
    base_seed: int,
    count: int,
    threads: int = 1,
) -> List[RealSeries]:
    """``count`` surrogates, the i-th seeded with base_seed + i; order follows i."""
    if count < 1:
        raise InvalidParameter(f"count must be >= 1, got {count}")
    kind = SurrogateKind.from_cli(kind) if isinstance(kind, str) else kind
    specs = [SurrogateSpec(kind=kind, seed=derive_seed(base_seed, i)) for i in range(count)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda spec: make_surrogate(series, spec), specs))
    return [make_surrogate(series, spec) for spec in specs]


def sign_magnitude_surrogates(series: RealSeries, seed: int) -> Dict[str, RealSeries]:
    """u(t) = s(t) |v_k(t)| with v_k a surrogate of the volatility |r(t)|.

    Phase randomization can make v_k negative, so its absolute value is used.
    """
    signs, magnitudes = split_sign_magnitude(series)
    out = {}
    for offset, (name, kind) in enumerate(
        [("u_shuffle", SurrogateKind.shuffle),
         ("u_phaserand", SurrogateKind.phase_randomize),
         ("u_both", SurrogateKind.shuffle_then_phase_randomize)]
    ):
        surrogate = make_surrogate(magnitudes, SurrogateSpec(kind=kind, seed=derive_seed(seed, offset)))
        u = recombine(signs, surrogate.derive(np.abs(surrogate.values)))
        out[name] = u.derive(u.values, meta=f"{series.meta}:{name}")
    return out
