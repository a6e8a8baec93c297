"""Empirical densities and weighted least-squares fits of the q-Gaussian and F families.

Both families are fitted in density space. The amplitude enters linearly and
is solved in closed form inside the objective, so the simplex only searches
the shape parameters. The model is averaged over each bin before it is
compared with the histogram, and the weights width / max(density, eps) are
taken from the data for the simplex search, then from the fitted curve for a
few ``least_squares`` rounds that also give the parameter standard errors.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import least_squares, minimize

from src.data_models.errors import ConvergenceFailure, EmptyInput, InsufficientBins, InvalidParameter, NonPositiveForLog
from src.data_models.results import EmpiricalPdf, FitReport
from src.data_models.series import RealSeries
from src.utils.app_logging import setup_logger

logger = setup_logger()

MIN_BINS = 4
MIN_FIT_BINS = 8
DEFAULT_LOG_BINS = 50
Q_ONE_TOL = 1e-9
PENALTY = 1e100
LOG_CAP = 700.0
GAUSS_NODES = 8
REWEIGHT_ROUNDS = 6
REWEIGHT_TOL = 1e-8


# ========================
# Empirical density
# ========================
def empirical_pdf(
    series: Union[RealSeries, np.ndarray],
    bins: Optional[int] = None,
    binning: Literal["linear", "log"] = "linear",
    value_range: Optional[Tuple[float, float]] = None,
) -> EmpiricalPdf:
    """Normalized histogram. Empty bins stay in with density 0.

    Linear bins default to the Freedman-Diaconis rule, log bins to 50
    geometric bins. Samples outside ``value_range`` are left out.
    """
    values = series.values if isinstance(series, RealSeries) else np.asarray(series, dtype=float).reshape(-1)
    if values.size == 0:
        raise EmptyInput("no samples for a density estimate")
    if bins is not None and int(bins) < MIN_BINS:
        raise InvalidParameter(f"need at least {MIN_BINS} bins, got {bins}")
    lo, hi = value_range if value_range is not None else (float(values.min()), float(values.max()))

    if binning == "log":
        if np.any(values <= 0) or lo <= 0:
            raise NonPositiveForLog("log binning needs strictly positive data")
        edges = np.geomspace(lo, hi, (bins or DEFAULT_LOG_BINS) + 1)
    elif binning == "linear":
        if bins is None:
            edges = np.histogram_bin_edges(values, bins="fd", range=(lo, hi))
            if edges.size - 1 < MIN_BINS:
                edges = np.histogram_bin_edges(values, bins=MIN_BINS, range=(lo, hi))
        else:
            edges = np.histogram_bin_edges(values, bins=int(bins), range=(lo, hi))
    else:
        raise InvalidParameter(f"binning must be 'linear' or 'log', got {binning!r}")

    counts, edges = np.histogram(values, bins=edges)
    total = int(counts.sum())
    widths = np.diff(edges)
    density = counts / (total * widths) if total else np.zeros(counts.size)
    centers = np.sqrt(edges[:-1] * edges[1:]) if binning == "log" else 0.5 * (edges[:-1] + edges[1:])
    return EmpiricalPdf(centers=centers, density=density, bin_edges=edges, n_samples=total, binning=binning)


def _histogram_moments(pdf: EmpiricalPdf) -> Tuple[float, float, float]:
    mass = pdf.density * pdf.widths
    if not mass.sum() > 0:
        raise ConvergenceFailure("density is zero everywhere; nothing to fit")
    mass = mass / mass.sum()
    mean = float(np.sum(mass * pdf.centers))
    var = float(np.sum(mass * (pdf.centers - mean) ** 2))
    m4 = float(np.sum(mass * (pdf.centers - mean) ** 4))
    excess = m4 / var**2 - 3.0 if var > 0 else 0.0
    return mean, var, excess


# ========================
# Model shapes (amplitude excluded)
# ========================
def _log_qexp(u: np.ndarray, q: float) -> np.ndarray:
    """log of [1 - (1-q) u]^(1/(1-q)); -inf outside the support."""
    if abs(q - 1.0) < Q_ONE_TOL:
        return -u
    arg = -(1.0 - q) * u
    out = np.full(u.shape, -np.inf)
    inside = arg > -1.0
    out[inside] = np.log1p(arg[inside]) / (1.0 - q)
    return out


def q_gaussian_shape(x: np.ndarray, q: float, lam: float) -> np.ndarray:
    """[1 - (1-q) x^2 / lambda]^(1/(1-q)), the q -> 1 limit being exp(-x^2/lambda)."""
    return np.exp(np.minimum(_log_qexp(np.asarray(x) ** 2 / lam, q), LOG_CAP))


def f_distribution_shape(v: np.ndarray, theta: float, phi: float, q: float) -> np.ndarray:
    """(v/theta)^phi [1 - (1-q) v/theta]^(1/(1-q)) for v > 0."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape)
    pos = v > 0
    u = v[pos] / theta
    out[pos] = np.exp(np.minimum(phi * np.log(u) + _log_qexp(u, q), LOG_CAP))
    return out


@dataclass(frozen=True)
class _Family:
    name: Literal["f_distribution", "q_gaussian"]
    names: Tuple[str, ...]
    shape: Callable[..., np.ndarray]
    to_natural: Callable[[np.ndarray], Tuple[float, ...]]
    from_natural: Callable[[Sequence[float]], np.ndarray]
    valid: Callable[[Tuple[float, ...]], bool]
    amplitude_name: str


QGAUSS = _Family(
    name="q_gaussian",
    names=("q", "lambda"),
    shape=q_gaussian_shape,
    to_natural=lambda p: (float(p[0]), float(np.exp(p[1]))),
    from_natural=lambda n: np.array([n[0], np.log(n[1])]),
    valid=lambda n: n[0] < 3.0,
    amplitude_name="Z",
)

FDIST = _Family(
    name="f_distribution",
    names=("theta", "phi", "q"),
    shape=f_distribution_shape,
    to_natural=lambda p: (float(np.exp(p[0])), float(np.exp(p[1]) - 1.0), float(p[2])),
    from_natural=lambda n: np.array([np.log(n[0]), np.log(n[1] + 1.0), n[2]]),
    valid=lambda n: True,
    amplitude_name="amplitude",
)


# ========================
# Weighted least squares
# ========================
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_NODES)


@dataclass(frozen=True)
class _Problem:
    x: np.ndarray
    nodes: np.ndarray
    d: np.ndarray
    widths: np.ndarray
    eps: np.ndarray
    w: np.ndarray
    scale: float

    def reweighted(self, model: np.ndarray) -> "_Problem":
        """Weights width / max(model, eps) taken from the current fitted curve."""
        w = self.widths / np.maximum(model, self.eps)
        return replace(self, w=w, scale=float(np.sum(w * self.d**2)))


def _problem(pdf: EmpiricalPdf, nonempty_only: bool) -> _Problem:
    if not np.any(pdf.density > 0):
        raise ConvergenceFailure("density is zero everywhere; nothing to fit")
    nonempty = pdf.density > 0
    if int(np.count_nonzero(nonempty)) < MIN_FIT_BINS:
        raise InsufficientBins(f"{int(np.count_nonzero(nonempty))} nonempty bins, need {MIN_FIT_BINS}")
    keep = nonempty if nonempty_only else np.ones(pdf.density.size, dtype=bool)
    n = max(pdf.n_samples, 1)
    lo, hi = pdf.bin_edges[:-1][keep], pdf.bin_edges[1:][keep]
    widths = hi - lo
    # one sample in a bin sets the weight floor
    eps = 1.0 / (n * widths)
    d = pdf.density[keep]
    w = widths / np.maximum(d, eps)
    nodes = 0.5 * (lo + hi)[:, None] + 0.5 * widths[:, None] * _GL_NODES[None, :]
    return _Problem(x=pdf.centers[keep], nodes=nodes, d=d, widths=widths, eps=eps, w=w, scale=float(np.sum(w * d**2)))


def _bin_shape(family: _Family, prob: _Problem, natural: Sequence[float]) -> np.ndarray:
    """Model shape averaged over each bin."""
    return 0.5 * family.shape(prob.nodes, *natural) @ _GL_WEIGHTS


def _best_amplitude(g: np.ndarray, prob: _Problem) -> float:
    denom = float(np.sum(prob.w * g * g))
    if denom <= 0 or not np.isfinite(denom):
        return 0.0
    return float(np.sum(prob.w * g * prob.d)) / denom


def _objective(params: np.ndarray, family: _Family, prob: _Problem) -> float:
    natural = family.to_natural(params)
    if not family.valid(natural) or not all(np.isfinite(natural)):
        return PENALTY
    g = _bin_shape(family, prob, natural)
    if not np.all(np.isfinite(g)):
        return PENALTY
    amp = _best_amplitude(g, prob)
    value = float(np.sum(prob.w * (amp * g - prob.d) ** 2)) / prob.scale
    return value if np.isfinite(value) else PENALTY


def _run_start(start: np.ndarray, family: _Family, prob: _Problem):
    res = minimize(
        _objective, start, args=(family, prob), method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000 * start.size, "maxfev": 8000 * start.size},
    )
    return float(res.fun), np.asarray(res.x)


def _polish(params: np.ndarray, family: _Family, prob: _Problem):
    """least_squares on (shape params, amplitude); returns natural values, amplitude and stderr."""
    natural = family.to_natural(params)
    amp0 = _best_amplitude(_bin_shape(family, prob, natural), prob)
    sqrt_w = np.sqrt(prob.w)

    def residuals(theta):
        nat = family.to_natural(theta[:-1])
        if not family.valid(nat):
            return np.full(prob.x.size, 1e50)
        return sqrt_w * (theta[-1] * _bin_shape(family, prob, nat) - prob.d)

    x0 = np.append(params, amp0)
    fit = least_squares(residuals, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=20000)
    if not np.all(np.isfinite(fit.x)) or float(np.sum(fit.fun**2)) > float(np.sum(residuals(x0) ** 2)):
        fit_x, jac, fun = x0, None, residuals(x0)
    else:
        fit_x, jac, fun = fit.x, fit.jac, fit.fun

    stderr_t = np.full(fit_x.size, np.nan)
    dof = prob.x.size - fit_x.size
    if jac is not None and dof > 0:
        cov = np.linalg.pinv(jac.T @ jac) * float(np.sum(fun**2)) / dof
        stderr_t = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    nat = family.to_natural(fit_x[:-1])
    # delta method back to natural parameters
    eps = 1e-7
    natural_se = []
    for i in range(len(nat)):
        bumped = fit_x[:-1].copy()
        bumped[i] += eps
        natural_se.append(abs(family.to_natural(bumped)[i] - nat[i]) / eps * stderr_t[i])
    return nat, float(fit_x[-1]), natural_se, float(stderr_t[-1])


def _fit(
    pdf: EmpiricalPdf,
    family: _Family,
    starts: List[np.ndarray],
    nonempty_only: bool,
    threads: int,
) -> FitReport:
    prob = _problem(pdf, nonempty_only)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda s: _run_start(s, family, prob), starts))
    else:
        outcomes = [_run_start(s, family, prob) for s in starts]

    finite = [(value, i) for i, (value, _) in enumerate(outcomes) if value < PENALTY]
    if not finite:
        raise ConvergenceFailure(f"{family.name}: every start failed")
    best_value, best = min(finite)
    logger.debug(f"{family.name}: best start {best} of {len(starts)}, objective {best_value:.3e}")

    natural, amplitude, natural_se, amp_se = _polish(outcomes[best][1], family, prob)
    round_, change = 0, float("nan")
    for round_ in range(1, REWEIGHT_ROUNDS + 1):
        model = amplitude * _bin_shape(family, prob, natural)
        if amplitude <= 0 or not np.all(np.isfinite(model)):
            break
        prob = prob.reweighted(model)
        previous = np.asarray(natural)
        natural, amplitude, natural_se, amp_se = _polish(family.from_natural(natural), family, prob)
        change = float(np.max(np.abs(np.asarray(natural) - previous) / np.maximum(np.abs(previous), 1e-12)))
        if change < REWEIGHT_TOL:
            break
    logger.debug(f"{family.name}: {round_} reweighting rounds, last relative change {change:.2e}")

    fitted = amplitude * _bin_shape(family, prob, natural)
    if not np.all(np.isfinite(fitted)) or amplitude <= 0:
        raise ConvergenceFailure(f"{family.name}: fit produced an invalid curve")

    residual = fitted - prob.d
    ss_tot = float(np.sum((prob.d - prob.d.mean()) ** 2))
    r2 = 1.0 - float(np.sum(residual**2)) / ss_tot if ss_tot > 0 else 0.0

    params: Dict[str, float] = dict(zip(family.names, natural))
    stderr: Dict[str, Optional[float]] = {k: (float(v) if np.isfinite(v) else None) for k, v in zip(family.names, natural_se)}
    if family.amplitude_name == "Z":
        params["Z"] = 1.0 / amplitude
        stderr["Z"] = amp_se / amplitude**2 if np.isfinite(amp_se) else None
    else:
        params["amplitude"] = amplitude
        stderr["amplitude"] = amp_se if np.isfinite(amp_se) else None

    return FitReport(
        family=family.name,
        params=params,
        stderr=stderr,
        chi2_per_n=float(np.mean(residual**2)),
        r2=float(np.clip(r2, 0.0, 1.0)),
        n_bins=int(prob.x.size),
        n_starts=len(starts),
        best_start=int(best),
    )


def fit_q_gaussian(pdf: EmpiricalPdf, threads: int = 1) -> FitReport:
    """p(x) = Z^-1 [1 - (1-q) x^2/lambda]^(1/(1-q)) over all bins.

    Starts: q from the excess kurtosis (Student-t match), lambda = var (5 - 3q),
    plus the Gaussian point and two q offsets.
    """
    _, var, excess = _histogram_moments(pdf)
    var = var if var > 0 else 1.0
    q_mom = 1.0 + 2.0 / (4.0 + 6.0 / excess + 1.0) if excess > 0 else 1.0

    def start(q: float) -> np.ndarray:
        q = float(np.clip(q, 0.5, 2.5))
        lam = var * (5.0 - 3.0 * q) if 5.0 - 3.0 * q > 0.1 else var
        return QGAUSS.from_natural((q, lam))

    starts = [start(q_mom), start(1.0), start(q_mom + 0.2), start(q_mom - 0.2)]
    return _fit(pdf, QGAUSS, starts, nonempty_only=False, threads=threads)


def fit_f_distribution(pdf: EmpiricalPdf, threads: int = 1) -> FitReport:
    """F(v) = A (v/theta)^phi [1 - (1-q) v/theta]^(1/(1-q)) over nonempty bins.

    Starts: the Gamma moment match (theta = var/mean, phi = mean^2/var - 1)
    at a few q values.
    """
    if pdf.bin_edges[0] < 0:
        raise InvalidParameter("F-distribution fits need nonnegative data")
    mean, var, _ = _histogram_moments(pdf)
    if mean <= 0 or var <= 0:
        raise ConvergenceFailure("histogram has no spread to start from")
    theta0 = var / mean
    phi0 = max(mean**2 / var - 1.0, -0.5)
    starts = [FDIST.from_natural((theta0, phi0, q)) for q in (1.0, 1.05, 1.1, 0.95)]
    return _fit(pdf, FDIST, starts, nonempty_only=True, threads=threads)


def model_density(report: FitReport, x: np.ndarray) -> np.ndarray:
    """Fitted density (amplitude included) at ``x``."""
    p = report.params
    if report.family == "q_gaussian":
        return q_gaussian_shape(x, p["q"], p["lambda"]) / p["Z"]
    return p["amplitude"] * f_distribution_shape(x, p["theta"], p["phi"], p["q"])


def binned_model_density(report: FitReport, bin_edges: np.ndarray) -> np.ndarray:
    """Fitted density averaged over each bin, the quantity compared with the histogram."""
    edges = np.asarray(bin_edges, dtype=float)
    mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    return 0.5 * model_density(report, nodes) @ _GL_WEIGHTS


def fitted_curve_frame(pdf: EmpiricalPdf, report: FitReport) -> pd.DataFrame:
    """(center, lo, hi, empirical, fitted) rows for plotting."""
    frame = pdf.to_frame().rename(columns={"density": "empirical"})
    frame["fitted"] = binned_model_density(report, pdf.bin_edges)
    return frame
