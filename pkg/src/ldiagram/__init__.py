from .quadrants import build_ldiagram, quadrant_stats, near_axis_fraction
from .boxcount import quantize_points, interleave, box_count, fractal_dimension, box_dimension

__all__ = [
    "build_ldiagram",
    "quadrant_stats",
    "near_axis_fraction",
    "quantize_points",
    "interleave",
    "box_count",
    "fractal_dimension",
    "box_dimension",
]
