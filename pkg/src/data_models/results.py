"""Result carriers produced by the estimators, with JSON/CSV friendly views."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from src.data_models.errors import InvalidParameter, LengthMismatch


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=float)]


@dataclass(frozen=True, eq=False)
class FluctuationTable:
    """F_z(s) with rows indexed by window size and columns by moment order."""

    s: np.ndarray
    z: np.ndarray
    F: np.ndarray
    n_segments: np.ndarray
    profile_order: int = 2
    n: int = 0

    def __post_init__(self):
        if self.F.shape != (self.s.size, self.z.size):
            raise LengthMismatch(f"F has shape {self.F.shape}, expected {(self.s.size, self.z.size)}")
        if self.n_segments.size != self.s.size:
            raise LengthMismatch("n_segments must have one entry per window size")
        if not np.all(self.F > 0):
            raise InvalidParameter("fluctuation functions must be strictly positive")


@dataclass(frozen=True, eq=False)
class ScalingResult:
    """h(z) per moment order with OLS diagnostics. tau is always z*h - 1."""

    z: np.ndarray
    h: np.ndarray
    stderr: np.ndarray
    r2: np.ndarray
    label: str = ""

    def __post_init__(self):
        for name in ("z", "h", "stderr", "r2"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.z.size == self.h.size == self.stderr.size == self.r2.size):
            raise LengthMismatch("z, h, stderr and r2 must share one length")
        if not np.all(np.isfinite(self.h)):
            raise InvalidParameter("h(z) must be finite")

    @property
    def tau(self) -> np.ndarray:
        return self.z * self.h - 1.0

    @classmethod
    def from_tau(cls, z, tau, label: str = "") -> "ScalingResult":
        """Build h from a known tau(z); at z = 0 h is the slope tau'(0)."""
        z = np.asarray(z, dtype=float)
        tau = np.asarray(tau, dtype=float)
        h = np.empty_like(z)
        nonzero = z != 0
        h[nonzero] = (tau[nonzero] + 1.0) / z[nonzero]
        slope = np.gradient(tau, z)
        h[~nonzero] = slope[~nonzero]
        zeros = np.zeros_like(z)
        return cls(z=z, h=h, stderr=zeros, r2=np.ones_like(z), label=label)

    def at(self, z_value: float) -> float:
        idx = np.flatnonzero(np.isclose(self.z, z_value))
        if idx.size == 0:
            raise InvalidParameter(f"z = {z_value} is not on the moment grid")
        return float(self.h[idx[0]])

    def to_dict(self) -> Dict[str, list]:
        return {"z": _floats(self.z), "h": _floats(self.h), "tau": _floats(self.tau),
                "stderr": _floats(self.stderr), "r2": _floats(self.r2)}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dict())


@dataclass(frozen=True, eq=False)
class MultifractalSpectrum:
    z: np.ndarray
    alpha: np.ndarray
    f_alpha: np.ndarray
    delta_h: float
    delta_alpha: float
    hurst: float
    support_dim: float
    alpha_monotonic: bool = True
    tau_concave: bool = True

    def to_dict(self) -> Dict[str, object]:
        return {
            "alpha": _floats(self.alpha),
            "f": _floats(self.f_alpha),
            "z": _floats(self.z),
            "delta_h": float(self.delta_h),
            "delta_alpha": float(self.delta_alpha),
            "hurst": float(self.hurst),
            "support_dim": float(self.support_dim),
            "alpha_monotonic": bool(self.alpha_monotonic),
            "tau_concave": bool(self.tau_concave),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"z": self.z, "alpha": self.alpha, "f": self.f_alpha})


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Split of the multifractality into dependence and distribution parts."""

    z: np.ndarray
    h_cor: np.ndarray
    h_pdf: np.ndarray
    h_pdf_prime: np.ndarray
    weight_pdf: float
    weight_cor: float
    delta_h: float
    delta_h_shf: float
    null_deviation: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "z": _floats(self.z),
            "h_cor": _floats(self.h_cor),
            "h_pdf": _floats(self.h_pdf),
            "h_pdf_prime": _floats(self.h_pdf_prime),
            "weight_pdf": float(self.weight_pdf),
            "weight_cor": float(self.weight_cor),
            "delta_h": float(self.delta_h),
            "delta_h_shf": float(self.delta_h_shf),
            "null_deviation": float(self.null_deviation),
        }


@dataclass(frozen=True)
class QuadrantStats:
    """Occupation of the four quadrants of an l-diagram (anticlockwise from x>0,y>0)."""

    p1: float
    p2: float
    p3: float
    p4: float
    n_pos_minus_neg: int
    sum_returns: float
    n_axis: int
    n_classified: int
    near_axis_fraction: float = 0.0

    def as_row(self) -> Dict[str, float]:
        return {
            "p1": self.p1, "p2": self.p2, "p3": self.p3, "p4": self.p4,
            "n_pos_minus_neg": self.n_pos_minus_neg, "sum_returns": self.sum_returns,
            "n_axis": self.n_axis, "n_classified": self.n_classified,
            "near_axis_fraction": self.near_axis_fraction,
        }


@dataclass(frozen=True, eq=False)
class BoxCountCurve:
    """Occupied-box counts per resolution m, optionally with the fitted dimension."""

    m: np.ndarray
    n_boxes: np.ndarray
    n_points: int
    d_f: Optional[float] = None
    fit_range: Optional[Tuple[int, int]] = None
    r2: Optional[float] = None
    stderr: Optional[float] = None
    saturated: Tuple[int, ...] = field(default_factory=tuple)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"m": self.m.astype(np.int64), "n_boxes": self.n_boxes.astype(np.int64)})


@dataclass(frozen=True, eq=False)
class EmpiricalPdf:
    centers: np.ndarray
    density: np.ndarray
    bin_edges: np.ndarray
    n_samples: int
    binning: Literal["linear", "log"] = "linear"

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"center": self.centers, "lo": self.bin_edges[:-1], "hi": self.bin_edges[1:],
                             "density": self.density})


class FitReport(BaseModel):
    """Outcome of a parametric density fit."""

    family: Literal["f_distribution", "q_gaussian"]
    params: Dict[str, float]
    stderr: Dict[str, Optional[float]] = Field(default_factory=dict)
    chi2_per_n: float = Field(..., ge=0)
    r2: float = Field(..., ge=0, le=1)
    n_bins: int
    n_starts: int
    best_start: int
