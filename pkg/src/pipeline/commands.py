"""argparse surface of mfscan: one handler per subcommand, each returning an exit code."""

import argparse
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.configs.config import Settings
from src.data_models.specs import MfdfaConfig, SurrogateKind
from src.fitting.density import empirical_pdf, fit_f_distribution, fit_q_gaussian, fitted_curve_frame
from src.ldiagram.boxcount import DEFAULT_FIT_RANGE, box_dimension
from src.ldiagram.quadrants import build_ldiagram
from src.pipeline.suite import (
    DEFAULT_LAGS,
    EXIT_FAILED,
    EXIT_OK,
    EXIT_PARTIAL,
    ORIGINAL,
    RunContext,
    exit_code,
    guarded,
    map_inputs,
    prepare_series,
    run_ldiagram_suite,
    run_mfdfa_suite,
    start_run,
    status_frame,
    surrogate_seeds,
)
from src.preprocess.ingest import intraday_profile, log_returns, split_sign_magnitude
from src.surrogates.factory import surrogate_batch
from src.tools.series_io import (
    is_point_file,
    read_points,
    read_prices,
    sniff_format,
    write_json,
    write_points,
    write_series,
    write_table,
)
from src.utils import data_generator as synth
from src.utils.rng import RNG_ID, derive_seed

SURROGATE_CHOICES = ("shuffle", "phaserand", "both")
SYNTH_KINDS = ("white", "fgn", "cascade", "superstat", "fdist", "sierpinski", "square", "line")

Handler = Callable[[argparse.Namespace, Settings], int]


# ========================
# Parser
# ========================
def _global_flags(settings: Settings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.seed, help="base seed (unsigned 64-bit)")
    common.add_argument("--threads", type=int, default=settings.threads, help="worker threads")
    common.add_argument("--out", default=settings.out_dir, help="directory receiving run folders")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default=settings.output_format)
    common.add_argument("--run-name", default=None, help="fixed run folder name instead of a timestamp")
    return common


def _mfdfa_flags(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument("--poly-order", type=int, default=settings.poly_order)
    parser.add_argument("--profile-order", type=int, choices=(1, 2), default=2)
    parser.add_argument("--two-pass", action="store_true", help="add backward segments")
    parser.add_argument("--fit-lo", type=int, default=None, help="smallest window in the regression")
    parser.add_argument("--fit-hi", type=int, default=None, help="largest window in the regression")
    parser.add_argument("--z-min", type=float, default=-3.0)
    parser.add_argument("--z-max", type=float, default=5.0)
    parser.add_argument("--z-step", type=float, default=0.25)


def _observable_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--observable", choices=("returns", "volatility"), default="returns")


def _box_flags(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument("--bits", type=int, default=settings.bits, help="bits per axis (4..31)")
    parser.add_argument("--fit-lo", type=int, default=None)
    parser.add_argument("--fit-hi", type=int, default=None)


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    common = _global_flags(settings)
    parser = argparse.ArgumentParser(prog="mfscan", description="Multifractal analysis of return series.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", parents=[common], help="log-returns, intraday adjustment, standardization")
    p.add_argument("inputs", nargs="+")
    _observable_flag(p)
    p.add_argument("--split", action="store_true", help="also write sign and magnitude series")

    p = sub.add_parser("mfdfa", parents=[common], help="h(z), tau(z) and the singularity spectrum")
    p.add_argument("inputs", nargs="+")
    _mfdfa_flags(p, settings)
    _observable_flag(p)
    p.add_argument("--surrogate", choices=SURROGATE_CHOICES, action="append", default=[])

    p = sub.add_parser("surrogate", parents=[common], help="write surrogate series")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--surrogate", choices=SURROGATE_CHOICES, required=True)
    p.add_argument("--count", type=int, default=1)
    _observable_flag(p)

    p = sub.add_parser("ldiagram", parents=[common], help="quadrant table and box dimension per lag")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--lag", type=int, action="append", default=None)
    _box_flags(p, settings)
    _observable_flag(p)

    p = sub.add_parser("boxdim", parents=[common], help="box dimension of point files or lagged series")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--lag", type=int, default=1, help="lag used when an input is a series")
    _box_flags(p, settings)

    p = sub.add_parser("synth", parents=[common], help="generate synthetic series or point sets")
    p.add_argument("kind", choices=SYNTH_KINDS)
    p.add_argument("--n", type=int, default=2**16)
    p.add_argument("--hurst", type=float, default=0.8)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--levels", type=int, default=16)
    p.add_argument("--gamma", type=float, default=1.82)
    p.add_argument("--delta", type=float, default=2.0)
    p.add_argument("--theta", type=float, default=0.32)
    p.add_argument("--phi", type=float, default=1.83)
    p.add_argument("--q", type=float, default=1.08)
    p.add_argument("--name", default=None, help="output file stem")

    p = sub.add_parser("fitpdf", parents=[common], help="fit q-Gaussian or F-distribution densities")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--family", choices=("fdist", "qgauss"), required=True)
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--binning", choices=("lin", "log"), default="lin")
    p.add_argument("--range", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--curve", action="store_true", help="also write (center, empirical, fitted)")
    _observable_flag(p)

    p = sub.add_parser("suite", parents=[common], help="batch MF-DFA and l-diagram tables")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--analysis", choices=("mfdfa", "ldiagram", "all"), default="all")
    _mfdfa_flags(p, settings)
    p.add_argument("--lags", type=int, nargs="+", default=list(DEFAULT_LAGS))
    p.add_argument("--bits", type=int, default=settings.bits)
    p.add_argument("--box-fit", type=int, nargs=2, default=None, metavar=("M_LO", "M_HI"),
                   help="box-counting fit range (default: 2..8 without saturated levels)")
    p.add_argument("--sign-magnitude", action="store_true", help="add sign x surrogate-magnitude series")
    _observable_flag(p)
    return parser


# ========================
# Config builders
# ========================
def mfdfa_config(args: argparse.Namespace) -> MfdfaConfig:
    steps = int(round((args.z_max - args.z_min) / args.z_step))
    z_grid = tuple(float(v) for v in np.round(args.z_min + args.z_step * np.arange(steps + 1), 12))
    fit_range = (args.fit_lo, args.fit_hi) if args.fit_lo is not None and args.fit_hi is not None else None
    return MfdfaConfig(
        poly_order=args.poly_order,
        profile_order=args.profile_order,
        z_grid=z_grid,
        fit_range=fit_range,
        segmentation="two_pass" if args.two_pass else "one_pass",
    )


def box_fit_range(args: argparse.Namespace) -> Optional[Tuple[int, int]]:
    if args.fit_lo is None and args.fit_hi is None:
        return None
    return (args.fit_lo or DEFAULT_FIT_RANGE[0], args.fit_hi or DEFAULT_FIT_RANGE[1])


def _check_bits(bits: int) -> int:
    if not 4 <= bits <= 31:
        raise argparse.ArgumentTypeError(f"--bits must be within 4..31, got {bits}")
    return bits


def _open_run(args: argparse.Namespace, config: Dict[str, object], seeds: Dict[str, int],
              inputs: Optional[List[str]] = None) -> RunContext:
    return start_run(
        command=args.command,
        inputs=inputs if inputs is not None else list(getattr(args, "inputs", [])),
        config=config,
        seeds=seeds,
        out_dir=args.out,
        output_format=args.output_format,
        threads=args.threads,
        run_name=args.run_name,
    )


def _finish(ctx: RunContext, outcomes) -> int:
    write_table(status_frame(outcomes), ctx.run_dir / "inputs", ctx.output_format)
    ok = sum(o.ok for o in outcomes)
    ctx.logger.info(f"{ok}/{len(outcomes)} inputs ok")
    ctx.close()
    return exit_code(ok, len(outcomes))


# ========================
# Handlers
# ========================
def cmd_preprocess(args: argparse.Namespace, settings: Settings) -> int:
    ctx = _open_run(args, {"observable": args.observable, "split": args.split}, {})

    def work(index: int, path: Path):
        folder = ctx.input_dir(index, path)
        if sniff_format(path) == "prices":
            profile = intraday_profile(log_returns(read_prices(path)))
            write_table(
                pd.DataFrame({"minute": profile.minute_index, "lambda": profile.lam, "n_days": profile.n_days}),
                folder / "intraday_profile",
                ctx.output_format,
            )
        series = prepare_series(path, args.observable)
        write_series(series, folder / "series.csv")
        if args.split:
            signs, magnitudes = split_sign_magnitude(series)
            write_series(signs, folder / "signs.csv")
            write_series(magnitudes, folder / "magnitudes.csv")
        return {"n": len(series)}

    return _finish(ctx, map_inputs(guarded(ctx, work), args.inputs, ctx.threads))


def cmd_mfdfa(args: argparse.Namespace, settings: Settings) -> int:
    cfg = mfdfa_config(args)
    kinds = [ORIGINAL] + [k for k in SURROGATE_CHOICES if k in args.surrogate]
    seeds = {k: v for k, v in surrogate_seeds(args.seed).items() if k in kinds}
    ctx = _open_run(args, {"mfdfa": cfg.model_dump(mode="json"), "kinds": kinds, "observable": args.observable}, seeds)
    result = run_mfdfa_suite(args.inputs, cfg, ctx, args.seed, kinds=kinds, observable=args.observable)
    ctx.close()
    return result.exit_code


def cmd_surrogate(args: argparse.Namespace, settings: Settings) -> int:
    kind = SurrogateKind.from_cli(args.surrogate)
    if args.count < 1:
        raise argparse.ArgumentTypeError("--count must be >= 1")
    seeds = {f"{args.surrogate}_{i}": derive_seed(args.seed, i) for i in range(args.count)}
    ctx = _open_run(args, {"kind": kind.value, "count": args.count, "observable": args.observable}, seeds)

    def work(index: int, path: Path):
        folder = ctx.input_dir(index, path)
        series = prepare_series(path, args.observable)
        batch = surrogate_batch(series, kind, args.seed, args.count)
        for i, surrogate in enumerate(batch):
            write_series(surrogate, folder / f"surrogate_{args.surrogate}_{i}.csv")
        write_json(
            {"kind": kind.value, "seeds": [derive_seed(args.seed, i) for i in range(args.count)], "rng": RNG_ID,
             "source": str(path), "n": len(series)},
            folder / "surrogate_header.json",
        )
        return {"count": len(batch)}

    return _finish(ctx, map_inputs(guarded(ctx, work), args.inputs, ctx.threads))


def cmd_ldiagram(args: argparse.Namespace, settings: Settings) -> int:
    bits = _check_bits(args.bits)
    lags = args.lag or [1]
    fit_range = box_fit_range(args)
    config = {"lags": lags, "bits": bits, "fit_range": fit_range, "observable": args.observable}
    ctx = _open_run(args, config, surrogate_seeds(args.seed))
    result = run_ldiagram_suite(args.inputs, ctx, args.seed, lags=lags, bits=bits, fit_range=fit_range,
                                observable=args.observable)
    ctx.close()
    return result.exit_code


def cmd_boxdim(args: argparse.Namespace, settings: Settings) -> int:
    bits = _check_bits(args.bits)
    fit_range = box_fit_range(args)
    ctx = _open_run(args, {"bits": bits, "fit_range": fit_range, "lag": args.lag}, {})

    def work(index: int, path: Path):
        folder = ctx.input_dir(index, path)
        if is_point_file(path):
            points = read_points(path)
        else:
            points = build_ldiagram(prepare_series(path, "returns"), args.lag)
        curve = box_dimension(points, bits, fit_range)
        write_table(curve.to_frame(), folder / "boxcount", ctx.output_format)
        write_json(
            {"d_f": curve.d_f, "r2": curve.r2, "stderr": curve.stderr, "fit_range": list(curve.fit_range),
             "n_points": curve.n_points, "saturated": list(curve.saturated)},
            folder / "boxdim.json",
        )
        return {"d_f": curve.d_f}

    return _finish(ctx, map_inputs(guarded(ctx, work), args.inputs, ctx.threads))


def _synthesize(args: argparse.Namespace) -> Dict[str, object]:
    """Generated objects keyed by file stem: RealSeries or (N, 2) point arrays."""
    stem = args.name or args.kind
    if args.kind == "white":
        return {stem: synth.gaussian_white(args.n, args.seed)}
    if args.kind == "fgn":
        return {stem: synth.fgn(args.n, args.hurst, args.seed)}
    if args.kind == "cascade":
        return {stem: synth.binomial_cascade({"p": args.p, "levels": args.levels})}
    if args.kind == "superstat":
        y, sigma = synth.superstat_series(args.n, {"gamma": args.gamma, "delta": args.delta, "seed": args.seed})
        return {stem: y, f"{stem}_sigma": sigma}
    if args.kind == "fdist":
        return {stem: synth.sample_f_distribution(args.n, args.theta, args.phi, args.q, args.seed)}
    sampler = {"sierpinski": synth.sierpinski_points, "square": synth.uniform_square, "line": synth.line_points}
    return {stem: sampler[args.kind](args.n, args.seed)}


def cmd_synth(args: argparse.Namespace, settings: Settings) -> int:
    outputs = _synthesize(args)
    params = {k: getattr(args, k) for k in ("n", "hurst", "p", "levels", "gamma", "delta", "theta", "phi", "q")}
    ctx = _open_run(args, {"kind": args.kind, **params}, {"synth": args.seed}, inputs=[])
    for stem, obj in outputs.items():
        target = ctx.run_dir / f"{stem}.csv"
        path = write_points(obj, target) if isinstance(obj, np.ndarray) else write_series(obj, target)
        ctx.logger.info(f"synth {args.kind} -> {path}")
    ctx.close()
    return EXIT_OK


def cmd_fitpdf(args: argparse.Namespace, settings: Settings) -> int:
    binning = "log" if args.binning == "log" else "linear"
    value_range = tuple(args.range) if args.range else None
    config = {"family": args.family, "bins": args.bins, "binning": binning, "range": value_range,
              "observable": args.observable}
    ctx = _open_run(args, config, {})
    fitter = fit_f_distribution if args.family == "fdist" else fit_q_gaussian

    def work(index: int, path: Path):
        folder = ctx.input_dir(index, path)
        series = prepare_series(path, args.observable)
        pdf = empirical_pdf(series, bins=args.bins, binning=binning, value_range=value_range)
        report = fitter(pdf, threads=ctx.threads)
        write_json(report.model_dump(mode="json"), folder / "fit.json")
        if args.curve:
            write_table(fitted_curve_frame(pdf, report), folder / "curve", ctx.output_format)
        return {"params": report.params}

    return _finish(ctx, map_inputs(guarded(ctx, work), args.inputs, ctx.threads))


def cmd_suite(args: argparse.Namespace, settings: Settings) -> int:
    bits = _check_bits(args.bits)
    cfg = mfdfa_config(args)
    box_fit = tuple(args.box_fit) if args.box_fit else None
    config = {
        "analysis": args.analysis,
        "mfdfa": cfg.model_dump(mode="json"),
        "lags": list(args.lags),
        "bits": bits,
        "box_fit": box_fit,
        "observable": args.observable,
        "sign_magnitude": args.sign_magnitude,
    }
    ctx = _open_run(args, config, surrogate_seeds(args.seed))
    codes = []
    if args.analysis in ("mfdfa", "all"):
        codes.append(run_mfdfa_suite(args.inputs, cfg, ctx, args.seed, observable=args.observable,
                                     sign_magnitude=args.sign_magnitude).exit_code)
    if args.analysis in ("ldiagram", "all"):
        codes.append(run_ldiagram_suite(args.inputs, ctx, args.seed, lags=args.lags, bits=bits,
                                        fit_range=box_fit, observable=args.observable).exit_code)
    ctx.close()
    if all(c == EXIT_OK for c in codes):
        return EXIT_OK
    return EXIT_FAILED if all(c == EXIT_FAILED for c in codes) else EXIT_PARTIAL


COMMANDS: Dict[str, Handler] = {
    "preprocess": cmd_preprocess,
    "mfdfa": cmd_mfdfa,
    "surrogate": cmd_surrogate,
    "ldiagram": cmd_ldiagram,
    "boxdim": cmd_boxdim,
    "synth": cmd_synth,
    "fitpdf": cmd_fitpdf,
    "suite": cmd_suite,
}
