"""Reading input files and writing result tables.

Inputs come in three CSV shapes: ``day,minute,price`` records (preprocessed
before analysis), ``index,value`` series, or a bare column of returns.
Every float is written with 17 significant digits so it reads back exactly.
"""

import json
from pathlib import Path
from typing import Any, List, Literal, Union

import numpy as np
import pandas as pd

from src.data_models.errors import EmptyInput, InvalidParameter
from src.data_models.series import PricedRecord, RealSeries
from src.preprocess.ingest import preprocess_prices
from src.utils.app_logging import setup_logger

logger = setup_logger()

FLOAT_FORMAT = "%.17g"
PRICE_COLUMNS = ("day", "minute", "price")

InputKind = Literal["prices", "series"]


def _has_header(path: Path) -> bool:
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first:
        raise EmptyInput(f"{path} is empty")
    try:
        [float(tok) for tok in first.split(",")]
    except ValueError:
        return True
    return False


def sniff_format(path: Union[str, Path]) -> InputKind:
    path = Path(path)
    if not _has_header(path):
        return "series"
    columns = pd.read_csv(path, nrows=0).columns.str.strip().str.lower()
    return "prices" if set(PRICE_COLUMNS) <= set(columns) else "series"


def read_prices(path: Union[str, Path]) -> List[PricedRecord]:
    frame = pd.read_csv(path, float_precision="round_trip")
    frame.columns = frame.columns.str.strip().str.lower()
    missing = [c for c in PRICE_COLUMNS if c not in frame.columns]
    if missing:
        raise InvalidParameter(f"{path}: missing columns {missing}")
    if frame.empty:
        raise EmptyInput(f"{path} holds no records")
    return [
        PricedRecord(day=int(d), minute=int(m), price=float(p))
        for d, m, p in zip(frame["day"], frame["minute"], frame["price"])
    ]


def read_series(path: Union[str, Path]) -> RealSeries:
    """A single column of values, or the ``value`` column of an ``index,value`` file."""
    path = Path(path)
    header = _has_header(path)
    frame = pd.read_csv(path, header=0 if header else None, float_precision="round_trip")
    if header:
        frame.columns = frame.columns.str.strip().str.lower()
    if frame.empty:
        raise EmptyInput(f"{path} holds no values")
    if header and "value" in frame.columns:
        values = frame["value"]
    else:
        values = frame.iloc[:, -1]
    return RealSeries(values=values.to_numpy(dtype=np.float64), meta=path.stem)


def load_input(path: Union[str, Path]) -> RealSeries:
    """Series ready for analysis; price files go through the full preprocessing chain."""
    path = Path(path)
    kind = sniff_format(path)
    logger.debug(f"load_input: {path} detected as {kind}")
    if kind == "prices":
        return preprocess_prices(read_prices(path), meta=path.stem)
    return read_series(path)


def is_point_file(path: Union[str, Path]) -> bool:
    path = Path(path)
    if not _has_header(path):
        return False
    columns = set(pd.read_csv(path, nrows=0).columns.str.strip().str.lower())
    return {"x", "y"} <= columns


def read_points(path: Union[str, Path]) -> np.ndarray:
    """(N, 2) array from the x and y columns of a point file."""
    frame = pd.read_csv(path, float_precision="round_trip")
    frame.columns = frame.columns.str.strip().str.lower()
    if frame.empty:
        raise EmptyInput(f"{path} holds no points")
    return frame[["x", "y"]].to_numpy(dtype=np.float64)


def write_points(points: np.ndarray, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame({"x": points[:, 0], "y": points[:, 1]}).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def series_frame(series: RealSeries) -> pd.DataFrame:
    return pd.DataFrame({"index": np.arange(len(series)), "value": series.values})


def write_series(series: RealSeries, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    series_frame(series).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def write_prices(records: List[PricedRecord], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {"day": [r.day for r in records], "minute": [r.minute for r in records], "price": [r.price for r in records]}
    )
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(obj: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_table(frame: pd.DataFrame, path: Union[str, Path], output_format: str = "csv") -> Path:
    """CSV with full precision, or JSON records when ``output_format`` is json."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if output_format == "json":
        path = path.with_suffix(".json")
        return write_json(frame.to_dict(orient="list"), path)
    path = path.with_suffix(".csv")
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path
