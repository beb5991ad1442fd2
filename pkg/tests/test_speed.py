"""Calibration curves, speed grids, and per-task scaling.

Frozen reference values were produced with mpmath at 50 significant digits
and rounded for comparison here.
"""

import math

import pytest
from hypothesis import given, strategies as st

from ejsp.model import SpeedGrid
from ejsp.speed import (
    GRID_HI,
    GRID_LO,
    energy_percentage,
    round_half_up,
    scale_task,
    speed_grid,
    time_fraction,
)


class TestEnergyPercentage:
    # floor(e^(-x/100) * 100), frozen against a 50-digit evaluation
    @pytest.mark.parametrize(
        "x,expected",
        [(0, 100), (1, 99), (10, 90), (50, 60), (100, 36), (230, 10), (460, 1), (461, 0), (1000, 0)],
    )
    def test_anchors(self, x, expected):
        assert energy_percentage(x) == expected

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            energy_percentage(-1)

    @given(st.integers(min_value=0, max_value=2000), st.integers(min_value=0, max_value=2000))
    def test_non_increasing(self, a, b):
        lo, hi = sorted((a, b))
        assert energy_percentage(lo) >= energy_percentage(hi)

    @given(st.floats(min_value=0, max_value=1e6, allow_nan=False))
    def test_range(self, x):
        assert 0 <= energy_percentage(x) <= 100


class TestTimeFraction:
    # 4.0704 * ln(2) / ln(1 + (2.5093 x)^3), frozen against a 50-digit evaluation
    @pytest.mark.parametrize(
        "x,expected",
        [
            (0.5, 2.58784595110665),
            (0.75, 1.38524113974076),
            (1.0, 1.00000210543696),
            (1.125, 0.893734018107031),
            (1.75, 0.63393404735579),
            (2.375, 0.526405818868313),
            (3.0, 0.465714415013598),
        ],
    )
    def test_anchors(self, x, expected):
        assert time_fraction(x) == pytest.approx(expected, abs=1e-12)

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            time_fraction(0.0)
        with pytest.raises(ValueError):
            time_fraction(-0.5)

    def test_strictly_decreasing_on_working_range(self):
        xs = [0.5 + i * 1e-3 for i in range(2501)]
        values = [time_fraction(x) for x in xs]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_log_base_invariance(self):
        # the ratio of logs is base-independent; check the explicit rewrite
        for x in (0.5, 0.77, 1.0, 1.9, 3.0):
            via_log2 = 4.0704 * math.log2(2) / math.log2(1 + (x * 2.5093) ** 3)
            via_log10 = 4.0704 * math.log10(2) / math.log10(1 + (x * 2.5093) ** 3)
            assert time_fraction(x) == pytest.approx(via_log2, abs=1e-9)
            assert time_fraction(x) == pytest.approx(via_log10, abs=1e-9)


class TestRoundHalfUp:
    @pytest.mark.parametrize(
        "value,expected",
        [(0.0, 0), (0.4999, 0), (0.5, 1), (1.5, 2), (2.5, 3), (49.5, 50), (129.39, 129)],
    )
    def test_half_goes_up(self, value, expected):
        assert round_half_up(value) == expected


class TestSpeedGrid:
    def test_five_speed_anchor(self):
        grid = speed_grid(5)
        expected = (0.5, 1.125, 1.75, 2.375, 3.0)
        assert len(grid.multipliers) == 5
        for got, want in zip(grid.multipliers, expected):
            assert got == pytest.approx(want, abs=1e-12)

    def test_single_speed_is_reference(self):
        assert speed_grid(1).multipliers == (1.0,)

    def test_two_speed_endpoints(self):
        assert speed_grid(2).multipliers == (GRID_LO, GRID_HI)

    @pytest.mark.parametrize("s", range(2, 12))
    def test_spacing(self, s):
        mult = speed_grid(s).multipliers
        assert mult[0] == GRID_LO
        assert mult[-1] == GRID_HI
        assert mult[-1] - mult[0] == pytest.approx(2.5, abs=1e-12)
        diffs = [b - a for a, b in zip(mult, mult[1:])]
        for d in diffs:
            assert d == pytest.approx(diffs[0], abs=1e-12)

    def test_rejects_non_positive_count(self):
        with pytest.raises(ValueError):
            speed_grid(0)

    def test_reference_index_nearest_one(self):
        assert speed_grid(5).reference_index == 1  # 1.125 is nearest 1.0
        assert speed_grid(1).reference_index == 0
        assert speed_grid(2).reference_index == 0  # 0.5 vs 3.0: 0.5 wins


class TestScaleTask:
    def test_three_speed_example(self):
        grid = SpeedGrid(multipliers=(0.5, 1.75, 3.0))
        scaled = scale_task(50, grid)
        assert scaled.times == (129, 32, 23)
        assert scaled.energies == (30, 105, 180)

    def test_clamps_to_one(self):
        grid = SpeedGrid(multipliers=(0.5, 3.0))
        scaled = scale_task(1, grid)
        assert scaled.times == (3, 1)  # 0.4657 rounds to 0, clamped
        assert scaled.energies == (50, 297)  # 99*0.5 = 49.5 rounds half-up

    def test_reference_grid_identity(self):
        grid = SpeedGrid(multipliers=(1.0,))
        scaled = scale_task(50, grid)
        assert scaled.times == (50,)
        assert scaled.energies == (60,)

    def test_rejects_bad_base(self):
        grid = SpeedGrid(multipliers=(1.0,))
        with pytest.raises(ValueError):
            scale_task(0, grid)

    @given(
        base=st.integers(min_value=1, max_value=100),
        s=st.integers(min_value=1, max_value=8),
    )
    def test_monotonicity(self, base, s):
        scaled = scale_task(base, speed_grid(s))
        assert all(v >= 1 for v in scaled.times)
        assert all(v >= 1 for v in scaled.energies)
        assert all(a >= b for a, b in zip(scaled.times, scaled.times[1:]))
        assert all(a <= b for a, b in zip(scaled.energies, scaled.energies[1:]))
