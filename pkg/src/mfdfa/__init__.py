from .engine import (
    build_profile,
    segment_variances,
    moment_fluctuation,
    fluctuation_table,
    scaling_exponents,
    mfdfa,
    tau_is_concave,
    legendre_spectrum,
    decompose,
    average_scaling,
    monofractal_fit,
    bifractal_crossover,
    delta_h,
)
from .partition import partition_sums, partition_tau

__all__ = [
    "build_profile",
    "segment_variances",
    "moment_fluctuation",
    "fluctuation_table",
    "scaling_exponents",
    "mfdfa",
    "tau_is_concave",
    "legendre_spectrum",
    "decompose",
    "average_scaling",
    "monofractal_fit",
    "bifractal_crossover",
    "delta_h",
    "partition_sums",
    "partition_tau",
]
