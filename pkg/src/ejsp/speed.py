"""Speed-scaling math: calibration curves, multiplier grids, task scaling.

Two fixed curves drive all scaling. ``energy_percentage`` maps a base
processing time to an energy percentage (exponential decay, floored to an
integer). ``time_fraction`` maps an energy multiplier to the fraction of the
base time a task needs at that speed; its constants are calibrated so the
fraction at multiplier 1.0 is ~1. All arithmetic is 64-bit IEEE floating
point; the constants are stored exactly as written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ejsp.model import SpeedGrid

TIME_SCALE = 4.0704
MULTIPLIER_SCALE = 2.5093

GRID_LO = 0.5
GRID_HI = 3.0


@dataclass(frozen=True)
class ScaledTask:
    """Per-speed times and energies for one base processing time."""

    times: tuple[int, ...]
    energies: tuple[int, ...]


def round_half_up(v: float) -> int:
    """Round half away from zero, for non-negative v. .5 cases occur."""
    return math.floor(v + 0.5)


def energy_percentage(x: float) -> int:
    """floor(e^(-x/100) * 100) for x >= 0; integer in [0, 100]."""
    if x < 0:
        raise ValueError(f"energy_percentage requires x >= 0, got {x}")
    return int(math.floor(math.exp(-x / 100.0) * 100.0))


def time_fraction(x: float) -> float:
    """TIME_SCALE * log(2) / log(1 + (x * MULTIPLIER_SCALE)^3) for x > 0.

    The ratio of logarithms makes the value independent of the log base.
    Strictly decreasing on the grid interval.
    """
    if x <= 0:
        raise ValueError(f"time_fraction requires x > 0, got {x}")
    return TIME_SCALE * math.log(2.0) / math.log(1.0 + (x * MULTIPLIER_SCALE) ** 3)


def speed_grid(speeds: int) -> SpeedGrid:
    """The `speeds` boundary points of [GRID_LO, GRID_HI] split into speeds-1
    equal parts; a single-speed grid is the reference multiplier {1.0}.
    """
    if speeds < 1:
        raise ValueError(f"speed_grid requires speeds >= 1, got {speeds}")
    if speeds == 1:
        return SpeedGrid((1.0,))
    step = (GRID_HI - GRID_LO) / (speeds - 1)
    return SpeedGrid(tuple(GRID_LO + s * step for s in range(speeds)))


def scale_task(base_time: int, grid: SpeedGrid) -> ScaledTask:
    """Per-speed times and energies for one task.

    energies[s] = round(energy_percentage(base) * multiplier_s), times[s] =
    round(base * time_fraction(multiplier_s)); both half-up, clamped to >= 1.
    """
    if base_time < 1:
        raise ValueError(f"scale_task requires base_time >= 1, got {base_time}")
    pct = energy_percentage(base_time)
    times = tuple(
        max(1, round_half_up(base_time * frac)) for frac in grid.time_fractions
    )
    energies = tuple(
        max(1, round_half_up(pct * mult)) for mult in grid.multipliers
    )
    return ScaledTask(times=times, energies=energies)
