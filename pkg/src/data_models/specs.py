"""Validated configuration models (pydantic). Their dumps form the run manifest."""

from __future__ import annotations

from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.data_models.errors import InsufficientScales

DEFAULT_S_MAX = 11585
DEFAULT_S_MIN = 8
DEFAULT_S_POINTS = 30


def default_z_grid() -> Tuple[float, ...]:
    """Moment orders -3, -2.75, ..., 5."""
    return tuple(float(z) for z in np.arange(-12, 21) * 0.25)


def default_s_grid(n: int, poly_order: int = 5) -> Tuple[int, ...]:
    """30 geometric window sizes from 8 to floor(n/4), clipped at 11585."""
    s_min = max(DEFAULT_S_MIN, poly_order + 2)
    s_max = min(n // 4, DEFAULT_S_MAX)
    if s_max <= s_min:
        return (s_min,)
    grid = np.unique(np.round(np.geomspace(s_min, s_max, DEFAULT_S_POINTS)).astype(np.int64))
    return tuple(int(s) for s in grid)


def default_fit_range(s_grid: Tuple[int, ...], n: int, poly_order: int) -> Tuple[int, int]:
    """Regression window trimming detrending bias at small s and sparse segments at large s."""
    grid = np.asarray(s_grid)
    inside = grid[(grid >= 5 * (poly_order + 1)) & (grid <= n // 16)]
    if inside.size >= 4:
        return int(inside[0]), int(inside[-1])
    return int(grid[0]), int(grid[-1])


class MfdfaConfig(BaseModel):
    """MF-DFA parameters.

    ``s_grid``/``fit_range`` left as None are filled from the series length by
    :meth:`resolved`.
    """

    model_config = ConfigDict(frozen=True)

    poly_order: int = Field(5, ge=0)
    profile_order: Literal[1, 2] = 2
    s_grid: Optional[Tuple[int, ...]] = None
    z_grid: Tuple[float, ...] = Field(default_factory=default_z_grid)
    fit_range: Optional[Tuple[int, int]] = None
    segmentation: Literal["one_pass", "two_pass"] = "one_pass"

    @field_validator("z_grid")
    @classmethod
    def _check_z(cls, z: Tuple[float, ...]) -> Tuple[float, ...]:
        arr = np.asarray(z, dtype=float)
        if arr.size < 3:
            raise ValueError("z_grid needs at least 3 moment orders")
        if np.any(np.diff(arr) <= 0):
            raise ValueError("z_grid must be strictly ascending")
        if not (np.any(arr == 0.0) and np.any(arr == 2.0)):
            raise ValueError("z_grid must contain 0 and 2")
        return z

    @model_validator(mode="after")
    def _check_scales(self) -> "MfdfaConfig":
        if self.s_grid is not None:
            s = np.asarray(self.s_grid)
            if s.size == 0 or np.any(np.diff(s) <= 0):
                raise ValueError("s_grid must be non-empty and strictly ascending")
            if s[0] < self.poly_order + 2:
                raise ValueError(f"smallest window {s[0]} is below poly_order + 2 = {self.poly_order + 2}")
        if self.fit_range is not None:
            lo, hi = self.fit_range
            if lo >= hi:
                raise ValueError("fit_range must satisfy s_lo < s_hi")
            if self.s_grid is not None and (lo < self.s_grid[0] or hi > self.s_grid[-1]):
                raise ValueError("fit_range must lie within the s_grid span")
        return self

    def resolved(self, n: int) -> "MfdfaConfig":
        """Copy with concrete ``s_grid`` and ``fit_range`` for a series of length n."""
        data = self.model_dump()
        if self.s_grid is None:
            data["s_grid"] = default_s_grid(n, self.poly_order)
        if self.fit_range is None:
            lo, hi = default_fit_range(data["s_grid"], n, self.poly_order)
            if lo >= hi:
                raise InsufficientScales(f"a series of length {n} leaves only the window size {lo}")
            data["fit_range"] = (lo, hi)
        return MfdfaConfig(**data)


class SurrogateKind(str, Enum):
    shuffle = "shuffle"
    phase_randomize = "phase_randomize"
    shuffle_then_phase_randomize = "shuffle_then_phase_randomize"

    @classmethod
    def from_cli(cls, name: str) -> "SurrogateKind":
        aliases = {"shuffle": cls.shuffle, "phaserand": cls.phase_randomize, "both": cls.shuffle_then_phase_randomize}
        return aliases.get(name) or cls(name)


class SurrogateSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: SurrogateKind
    seed: int = Field(0, ge=0, lt=2**64)


class GammaVarianceSpec(BaseModel):
    """Γ law of the inverse variance: density ∝ (x/δ)^γ exp(-x/δ)."""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(1.82, gt=-1)
    delta: float = Field(2.0, gt=0)
    seed: int = Field(0, ge=0, lt=2**64)


class CascadeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float = Field(..., gt=0, lt=1)
    levels: int = Field(..., ge=1, le=26)


class RunManifest(BaseModel):
    """Everything needed to reproduce a run directory."""

    command: str
    inputs: List[str]
    config: Dict[str, object]
    seeds: Dict[str, int]
    rng: str
    tool_version: str
    timestamp: str
