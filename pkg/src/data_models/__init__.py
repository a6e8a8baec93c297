from .errors import (
    MfscanError,
    InputError,
    EstimationError,
)
from .series import (
    PricedRecord,
    RealSeries,
    IntradayProfile,
    PointSet2D,
)
from .specs import (
    MfdfaConfig,
    SurrogateKind,
    SurrogateSpec,
    GammaVarianceSpec,
    CascadeSpec,
    RunManifest,
)
from .results import (
    FluctuationTable,
    ScalingResult,
    MultifractalSpectrum,
    Decomposition,
    QuadrantStats,
    BoxCountCurve,
    EmpiricalPdf,
    FitReport,
)

__all__ = [
    "MfscanError",
    "InputError",
    "EstimationError",
    "PricedRecord",
    "RealSeries",
    "IntradayProfile",
    "PointSet2D",
    "MfdfaConfig",
    "SurrogateKind",
    "SurrogateSpec",
    "GammaVarianceSpec",
    "CascadeSpec",
    "RunManifest",
    "FluctuationTable",
    "ScalingResult",
    "MultifractalSpectrum",
    "Decomposition",
    "QuadrantStats",
    "BoxCountCurve",
    "EmpiricalPdf",
    "FitReport",
]
