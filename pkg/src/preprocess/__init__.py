from .ingest import (
    log_returns,
    intraday_profile,
    deseasonalize,
    standardize,
    split_sign_magnitude,
    recombine,
    volatility,
    preprocess_prices,
)

__all__ = [
    "log_returns",
    "intraday_profile",
    "deseasonalize",
    "standardize",
    "split_sign_magnitude",
    "recombine",
    "volatility",
    "preprocess_prices",
]
