"""Batch runs over many input files: run directories, manifests, suites.

A run directory holds ``manifest.json``, ``run.log``, one sub-directory per
input and the aggregate tables. Inputs fail independently: an unreadable or
degenerate file produces an error row and the others carry on.
"""

import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import pandas as pd

from src import __version__
from src.data_models.errors import MfscanError
from src.data_models.results import ScalingResult
from src.data_models.series import RealSeries
from src.data_models.specs import MfdfaConfig, RunManifest, SurrogateKind, SurrogateSpec
from src.ldiagram.boxcount import DEFAULT_BITS, box_dimension
from src.ldiagram.quadrants import build_ldiagram, quadrant_stats
from src.mfdfa.engine import (
    average_scaling,
    bifractal_crossover,
    decompose,
    legendre_spectrum,
    mfdfa,
    monofractal_fit,
)
from src.preprocess.ingest import volatility
from src.surrogates.factory import make_surrogate, sign_magnitude_surrogates
from src.tools.series_io import load_input, write_json, write_table
from src.utils.app_logging import attach_run_log, detach_run_log, get_context_logger
from src.utils.rng import RNG_ID, derive_seed

T = TypeVar("T")

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2
EXIT_FAILED = 3

ORIGINAL = "original"
SURROGATE_LABELS = {
    SurrogateKind.shuffle: "shuffle",
    SurrogateKind.phase_randomize: "phaserand",
    SurrogateKind.shuffle_then_phase_randomize: "both",
}
DEFAULT_LAGS = (1, 2, 10, 50)


def surrogate_seeds(seed: int) -> Dict[str, int]:
    """One seed per surrogate kind, shared by all inputs of a run."""
    seeds = {label: derive_seed(seed, i) for i, label in enumerate(SURROGATE_LABELS.values())}
    seeds["sign_magnitude"] = derive_seed(seed, len(seeds))
    return seeds


# ========================
# Run directories
# ========================
@dataclass
class RunContext:
    run_id: str
    run_dir: Path
    output_format: str
    threads: int
    _sink: Optional[int] = None

    @property
    def logger(self):
        return get_context_logger("run", run=self.run_id)

    def input_dir(self, index: int, path: Path) -> Path:
        d = self.run_dir / f"{index:03d}_{Path(path).stem}"
        d.mkdir(parents=True, exist_ok=True)
        return d

    def close(self) -> None:
        if self._sink is not None:
            detach_run_log(self._sink)
            self._sink = None


def start_run(
    command: str,
    inputs: Sequence[str],
    config: Dict[str, object],
    seeds: Dict[str, int],
    out_dir: str,
    output_format: str = "csv",
    threads: int = 1,
    run_name: Optional[str] = None,
) -> RunContext:
    """Create the run directory, write the manifest and attach the per-run log."""
    stamp = datetime.now(timezone.utc)
    run_id = run_name or f"{command}_{stamp.strftime('%Y%m%d-%H%M%S')}_{uuid.uuid4().hex[:6]}"
    run_dir = Path(out_dir) / run_id
    run_dir.mkdir(parents=True, exist_ok=True)

    manifest = RunManifest(
        command=command,
        inputs=[str(p) for p in inputs],
        config=config,
        seeds=seeds,
        rng=RNG_ID,
        tool_version=__version__,
        timestamp=stamp.isoformat(),
    )
    write_json(manifest.model_dump(mode="json"), run_dir / "manifest.json")
    ctx = RunContext(run_id=run_id, run_dir=run_dir, output_format=output_format, threads=threads)
    ctx._sink = attach_run_log(run_dir, run_id)
    ctx.logger.info(f"run {run_id}: {command} over {len(inputs)} inputs")
    return ctx


def exit_code(n_ok: int, n_total: int) -> int:
    if n_total and n_ok == n_total:
        return EXIT_OK
    return EXIT_FAILED if n_ok == 0 else EXIT_PARTIAL


def map_inputs(func: Callable[[int, Path], T], inputs: Sequence[str], threads: int) -> List[T]:
    """Apply ``func(index, path)`` to each input, keeping input order."""
    items = [(i, Path(p)) for i, p in enumerate(inputs)]
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda item: func(*item), items))
    return [func(i, p) for i, p in items]


@dataclass
class InputOutcome:
    index: int
    path: str
    ok: bool
    error: str = ""
    payload: Dict[str, object] = field(default_factory=dict)


def guarded(ctx: RunContext, work: Callable[[int, Path], Dict[str, object]]) -> Callable[[int, Path], InputOutcome]:
    def run(index: int, path: Path) -> InputOutcome:
        log = get_context_logger(f"input:{path.name}", run=ctx.run_id)
        try:
            payload = work(index, path)
            log.info(f"{path} done")
            return InputOutcome(index=index, path=str(path), ok=True, payload=payload)
        except (MfscanError, OSError, ValueError) as e:
            log.error(f"{path} failed: {type(e).__name__}: {e}")
            return InputOutcome(index=index, path=str(path), ok=False, error=f"{type(e).__name__}: {e}")

    return run


def status_frame(outcomes: Sequence[InputOutcome]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"input": o.path, "status": "ok" if o.ok else "error", "error": o.error} for o in outcomes]
    )


def prepare_series(path: Path, observable: str) -> RealSeries:
    series = load_input(path)
    return volatility(series) if observable == "volatility" else series


# ========================
# MF-DFA suite
# ========================
def _spectrum_row(path: str, kind: str, result: ScalingResult) -> Dict[str, object]:
    spectrum = legendre_spectrum(result)
    crossover = bifractal_crossover(result)
    return {
        "input": path,
        "kind": kind,
        "hurst": spectrum.hurst,
        "delta_h": spectrum.delta_h,
        "delta_alpha": spectrum.delta_alpha,
        "alpha_min": float(spectrum.alpha.min()),
        "alpha_max": float(spectrum.alpha.max()),
        "support_dim": spectrum.support_dim,
        "monofractal_h": monofractal_fit(result),
        "bifractal_crossover": np.nan if crossover is None else crossover,
        "alpha_monotonic": spectrum.alpha_monotonic,
    }


def _write_scaling(ctx: RunContext, folder: Path, kind: str, result: ScalingResult, meta: Dict[str, object]) -> None:
    spectrum = legendre_spectrum(result)
    write_table(result.to_frame(), folder / f"scaling_{kind}", ctx.output_format)
    write_table(spectrum.to_frame(), folder / f"spectrum_{kind}", ctx.output_format)
    write_json(
        {"header": meta, "scaling": result.to_dict(), "spectrum": spectrum.to_dict(),
         "monofractal_h": monofractal_fit(result), "bifractal_crossover": bifractal_crossover(result)},
        folder / f"result_{kind}.json",
    )


@dataclass
class MfdfaSuiteResult:
    outcomes: List[InputOutcome]
    averages: Dict[str, ScalingResult]
    summary: pd.DataFrame
    exit_code: int


def run_mfdfa_suite(
    inputs: Sequence[str],
    cfg: MfdfaConfig,
    ctx: RunContext,
    seed: int,
    kinds: Sequence[str] = (ORIGINAL, "shuffle", "phaserand", "both"),
    observable: str = "returns",
    sign_magnitude: bool = False,
) -> MfdfaSuiteResult:
    """Per-input h(z) and spectra for the original series and its surrogates, plus tau averaged across inputs."""
    seeds = surrogate_seeds(seed)
    by_label = {label: kind for kind, label in SURROGATE_LABELS.items()}

    def work(index: int, path: Path) -> Dict[str, object]:
        series = prepare_series(path, observable)
        folder = ctx.input_dir(index, path)
        variants: Dict[str, Tuple[RealSeries, Dict[str, object]]] = {}
        for kind in kinds:
            if kind == ORIGINAL:
                variants[kind] = (series, {"kind": ORIGINAL, "observable": observable})
            else:
                spec = SurrogateSpec(kind=by_label[kind], seed=seeds[kind])
                variants[kind] = (make_surrogate(series, spec),
                                  {"kind": spec.kind.value, "seed": spec.seed, "rng": RNG_ID, "observable": observable})
        if sign_magnitude:
            for name, u in sign_magnitude_surrogates(series, seeds["sign_magnitude"]).items():
                variants[name] = (u, {"kind": name, "seed": seeds["sign_magnitude"], "rng": RNG_ID,
                                      "observable": observable})

        results: Dict[str, ScalingResult] = {}
        for kind, (variant, meta) in variants.items():
            results[kind] = mfdfa(variant, cfg, threads=ctx.threads)
            _write_scaling(ctx, folder, kind, results[kind], meta)

        if all(k in results for k in (ORIGINAL, "shuffle", "both")):
            try:
                parts = decompose(results[ORIGINAL], results["shuffle"], results["both"])
                write_json(parts.to_dict(), folder / "decomposition.json")
            except MfscanError as e:
                ctx.logger.warning(f"{path}: decomposition skipped: {e}")
        return {"results": results}

    outcomes = map_inputs(guarded(ctx, work), inputs, ctx.threads)
    good = [o for o in outcomes if o.ok]

    rows = []
    for o in good:
        for kind, result in o.payload["results"].items():
            rows.append(_spectrum_row(o.path, kind, result))

    averages: Dict[str, ScalingResult] = {}
    if good:
        for kind in good[0].payload["results"]:
            averages[kind] = average_scaling([o.payload["results"][kind] for o in good], label=f"average:{kind}")
            _write_scaling(ctx, ctx.run_dir / "average", kind, averages[kind], {"kind": kind, "n_inputs": len(good)})
            rows.append(_spectrum_row("average", kind, averages[kind]))

    summary = pd.DataFrame(rows)
    write_table(summary, ctx.run_dir / "mfdfa_summary", ctx.output_format)
    write_table(status_frame(outcomes), ctx.run_dir / "inputs_mfdfa", ctx.output_format)
    code = exit_code(len(good), len(outcomes))
    ctx.logger.info(f"mfdfa suite: {len(good)}/{len(outcomes)} inputs ok")
    return MfdfaSuiteResult(outcomes=outcomes, averages=averages, summary=summary, exit_code=code)


# ========================
# l-diagram suite
# ========================
@dataclass
class LdiagramSuiteResult:
    outcomes: List[InputOutcome]
    quadrants: pd.DataFrame
    dimensions: pd.DataFrame
    exit_code: int


def run_ldiagram_suite(
    inputs: Sequence[str],
    ctx: RunContext,
    seed: int,
    lags: Sequence[int] = DEFAULT_LAGS,
    bits: int = DEFAULT_BITS,
    fit_range: Optional[Tuple[int, int]] = None,
    observable: str = "returns",
) -> LdiagramSuiteResult:
    """Quadrant table and box dimension of every l-diagram, with shuffled and randomized columns."""
    seeds = surrogate_seeds(seed)

    def work(index: int, path: Path) -> Dict[str, object]:
        series = prepare_series(path, observable)
        folder = ctx.input_dir(index, path)
        shuffled = make_surrogate(series, SurrogateSpec(kind=SurrogateKind.shuffle, seed=seeds["shuffle"]))
        randomized = make_surrogate(series, SurrogateSpec(kind=SurrogateKind.phase_randomize, seed=seeds["phaserand"]))

        quad_rows, dim_rows = [], []
        for lag in lags:
            points = build_ldiagram(series, lag)
            stats = quadrant_stats(points, series)
            quad_rows.append({"input": str(path), "lag": int(lag), **stats.as_row()})

            curve = box_dimension(points, bits, fit_range)
            write_table(curve.to_frame(), folder / f"boxcount_lag{lag}", ctx.output_format)
            d_shf = box_dimension(build_ldiagram(shuffled, lag), bits, fit_range).d_f
            d_rnd = box_dimension(build_ldiagram(randomized, lag), bits, fit_range).d_f
            dim_rows.append({
                "input": str(path), "lag": int(lag), "d_f": curve.d_f, "d_f_shuffle": d_shf,
                "d_f_phaserand": d_rnd, "r2": curve.r2, "m_lo": curve.fit_range[0], "m_hi": curve.fit_range[1],
            })
        return {"quadrants": quad_rows, "dimensions": dim_rows}

    outcomes = map_inputs(guarded(ctx, work), inputs, ctx.threads)
    good = [o for o in outcomes if o.ok]
    quadrants = pd.DataFrame([row for o in good for row in o.payload["quadrants"]])
    dimensions = pd.DataFrame([row for o in good for row in o.payload["dimensions"]])

    write_table(quadrants, ctx.run_dir / "quadrants", ctx.output_format)
    write_table(dimensions, ctx.run_dir / "boxdim", ctx.output_format)
    write_table(status_frame(outcomes), ctx.run_dir / "inputs_ldiagram", ctx.output_format)
    ctx.logger.info(f"ldiagram suite: {len(good)}/{len(outcomes)} inputs ok")
    return LdiagramSuiteResult(
        outcomes=outcomes, quadrants=quadrants, dimensions=dimensions,
        exit_code=exit_code(len(good), len(outcomes)),
    )
