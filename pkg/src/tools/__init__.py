from .series_io import (
    sniff_format,
    read_prices,
    read_series,
    load_input,
    is_point_file,
    read_points,
    write_points,
    write_series,
    write_prices,
    write_json,
    write_table,
    FLOAT_FORMAT,
)

__all__ = [
    "sniff_format",
    "read_prices",
    "read_series",
    "load_input",
    "is_point_file",
    "read_points",
    "write_points",
    "write_series",
    "write_prices",
    "write_json",
    "write_table",
    "FLOAT_FORMAT",
]
