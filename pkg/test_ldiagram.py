#!/usr/bin/env python3
"""
Tests for l-diagrams, quadrant statistics and box-counting dimensions.
"""

import os
import sys

import numpy as np
import pytest

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.data_models.errors import DegenerateRange, LagTooLarge, OutOfRange
from src.data_models.series import RealSeries
from src.ldiagram import box_count, box_dimension, build_ldiagram, interleave, quadrant_stats, quantize_points
from src.utils.data_generator import gaussian_white, line_points, sierpinski_points, uniform_square


def test_build_ldiagram_pairs_lagged_values():
    series = RealSeries(values=np.arange(1.0, 7.0))
    points = build_ldiagram(series, 2)
    assert points.x.tolist() == [1.0, 2.0, 3.0, 4.0]
    assert points.y.tolist() == [3.0, 4.0, 5.0, 6.0]
    with pytest.raises(LagTooLarge):
        build_ldiagram(series, 6)


def test_quadrant_stats_excludes_axis_points():
    series = RealSeries(values=[1.0, -1.0, 2.0, -2.0, 0.0, 3.0])
    stats = quadrant_stats(build_ldiagram(series, 1), series)
    assert stats.n_axis == 2
    assert stats.n_classified == 3
    assert stats.p1 == 0.0 and stats.p3 == 0.0
    assert stats.p2 == pytest.approx(1 / 3)
    assert stats.p4 == pytest.approx(2 / 3)
    assert stats.n_pos_minus_neg == 1
    assert stats.sum_returns == pytest.approx(3.0)


def test_interleave_puts_x_above_y():
    assert interleave(np.array([[1, 0]]), 1).tolist() == [2]
    assert interleave(np.array([[0, 1]]), 1).tolist() == [1]
    assert interleave(np.array([[3, 0]]), 2).tolist() == [10]
    three_d = interleave(np.array([[1, 0, 0]]), 1)
    assert three_d.tolist() == [4]


def test_box_count_small_cases():
    same = box_count(np.array([[5, 5], [5, 5]]), 4)
    assert same.n_boxes.tolist() == [1, 1, 1, 1]
    corners = box_count(np.array([[0, 0], [15, 15]]), 4)
    assert corners.n_boxes.tolist() == [2, 2, 2, 2]
    with pytest.raises(OutOfRange):
        box_count(np.array([[16, 0]]), 4)


def test_box_count_matches_brute_force_cells():
    k = 16
    grid = quantize_points(uniform_square(10_000, 7), k)
    curve = box_count(grid, k)
    for m in range(1, k + 1):
        cells = grid >> np.uint64(k - m)
        assert curve.n_boxes[m - 1] == len(np.unique(cells, axis=0))


def test_iid_gaussian_quadrants_are_equiprobable():
    series = gaussian_white(100_000, 8)
    for lag in (1, 2, 10, 50):
        stats = quadrant_stats(build_ldiagram(series, lag), series)
        for p in (stats.p1, stats.p2, stats.p3, stats.p4):
            assert abs(p - 0.25) < 0.01


def test_box_dimension_is_stable_across_lags():
    series = gaussian_white(100_000, 8)
    dims = [box_dimension(build_ldiagram(series, lag), bits=16).d_f for lag in (1, 2, 10, 50)]
    assert max(dims) - min(dims) < 0.05


def test_quantize_rejects_flat_axis():
    with pytest.raises(DegenerateRange):
        quantize_points(np.array([[1.0, 0.0], [1.0, 1.0]]), 8)
    grid = quantize_points(np.array([[0.0, 0.0], [1.0, 1.0]]), 8)
    assert grid.max() == 255 and grid.min() == 0


@pytest.mark.parametrize(
    "sampler, expected, tol",
    [
        (uniform_square, 2.0, 0.08),
        (line_points, 1.0, 0.05),
        (sierpinski_points, np.log2(3.0), 0.06),
    ],
)
def test_known_dimensions(sampler, expected, tol):
    curve = box_dimension(sampler(2**16, 12), bits=16)
    assert curve.d_f == pytest.approx(expected, abs=tol)
    assert curve.r2 > 0.99


def test_saturated_levels_leave_default_fit_only():
    points = uniform_square(500, 3)
    default = box_dimension(points, bits=16)
    assert default.saturated
    assert default.fit_range[1] < 8
    explicit = box_dimension(points, bits=16, fit_range=(2, 8))
    assert explicit.fit_range == (2, 8)


def main():
    """Run all l-diagram checks without pytest"""
    print("🧪 mfscan l-diagram tests")
    print("=" * 50)
    test_build_ldiagram_pairs_lagged_values()
    test_quadrant_stats_excludes_axis_points()
    test_interleave_puts_x_above_y()
    test_box_count_small_cases()
    test_box_count_matches_brute_force_cells()
    test_iid_gaussian_quadrants_are_equiprobable()
    test_quantize_rejects_flat_axis()
    test_known_dimensions(uniform_square, 2.0, 0.08)
    test_known_dimensions(line_points, 1.0, 0.05)
    test_known_dimensions(sierpinski_points, np.log2(3.0), 0.06)
    test_saturated_levels_leave_default_fit_only()
    print("✅ all l-diagram checks passed")


if __name__ == "__main__":
    main()
