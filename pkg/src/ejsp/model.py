"""Shared domain types for energy-aware job-shop instances.

Everything here is immutable value data: instances, schedules and reports can
be shared freely between threads once constructed. Invariants are enforced by
validators (``validate_params`` here, ``evaluate.validate_instance`` for whole
instances), not by constructors, so that violations stay reportable data
instead of exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, Optional

DIST_KINDS = ("exponential", "gaussian", "uniform")
RRDD_MODES = ("none", "loose", "tight")

MAX_SEED = 2**64 - 1

# Due date sentinel: None in memory, the literal "inf" in files. Kept as None
# so unbounded dates cannot leak into integer arithmetic unnoticed.
UNBOUNDED = None


@dataclass(frozen=True)
class DistSpec:
    """Release-date distribution: kind plus optional parameters.

    Parameters may be left as None; the generator then derives them from the
    instance's work horizon. ``lam`` is the exponential rate (named lambda
    elsewhere; reserved word in Python).
    """

    kind: str
    lam: Optional[float] = None
    mu: Optional[float] = None
    sigma: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None

    def params(self) -> tuple[tuple[str, float], ...]:
        """The parameters that belong to this kind, in canonical order."""
        names = {
            "exponential": ("lam",),
            "gaussian": ("mu", "sigma"),
            "uniform": ("a", "b"),
        }.get(self.kind, ())
        return tuple(
            (name, value)
            for name in names
            if (value := getattr(self, name)) is not None
        )


@dataclass(frozen=True)
class InstanceParams:
    """Full generator configuration for one suite."""

    count: int
    jobs: int
    machines: int
    tasks_per_job: int
    speeds: int
    dist: DistSpec
    rrdd: str
    seed: int
    base_time_range: tuple[int, int] = (1, 100)


@dataclass(frozen=True)
class SpeedGrid:
    """Ordered energy multipliers, one per speed."""

    multipliers: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.multipliers)

    @cached_property
    def time_fractions(self) -> tuple[float, ...]:
        """Per-multiplier processing-time fractions, computed once per grid."""
        from ejsp.speed import time_fraction

        return tuple(time_fraction(x) for x in self.multipliers)

    @cached_property
    def reference_index(self) -> int:
        """Index of the multiplier nearest 1.0 (lowest index on ties)."""
        return min(
            range(len(self.multipliers)),
            key=lambda s: (abs(self.multipliers[s] - 1.0), s),
        )


@dataclass(frozen=True)
class TaskSpec:
    """One task: its machine, base time, per-speed times/energies and dates."""

    job: int
    position: int
    machine: int
    base_time: int
    times: tuple[int, ...]
    energies: tuple[int, ...]
    release: int
    due: Optional[int]


@dataclass(frozen=True)
class InstanceMetadata:
    """Reproducibility record attached to every instance.

    ``dates_relaxed`` and ``speed_subset`` describe derived variants:
    ``speed_subset`` holds the retained speed indices of the *original* grid
    (None means the full original grid).
    """

    seed: int
    instance_index: int
    dist: DistSpec
    rrdd: str
    generator_version: str
    prng_id: str
    dates_relaxed: bool = False
    speed_subset: Optional[tuple[int, ...]] = None

    @property
    def variant_tag(self) -> str:
        """Canonical variant label, used in file names and headers."""
        parts = []
        if self.dates_relaxed:
            parts.append("relaxed")
        if self.speed_subset is not None:
            parts.append("s" + "-".join(str(i + 1) for i in self.speed_subset))
        return "+".join(parts) if parts else "orig"


@dataclass(frozen=True)
class Instance:
    """One job-shop instance with speed-scalable tasks."""

    jobs: tuple[tuple[TaskSpec, ...], ...]
    machines: int
    speed_multipliers: SpeedGrid
    metadata: InstanceMetadata

    @property
    def n_jobs(self) -> int:
        return len(self.jobs)

    @property
    def n_tasks_per_job(self) -> int:
        return len(self.jobs[0]) if self.jobs else 0

    @property
    def n_speeds(self) -> int:
        return len(self.speed_multipliers)

    def iter_tasks(self):
        for route in self.jobs:
            yield from route


@dataclass(frozen=True)
class Schedule:
    """Per-task (start, speed index) assignment for one instance."""

    entries: Mapping[tuple[int, int], tuple[int, int]]

    def start(self, job: int, position: int) -> int:
        return self.entries[(job, position)][0]

    def speed(self, job: int, position: int) -> int:
        return self.entries[(job, position)][1]


@dataclass(frozen=True)
class ObjectiveReport:
    """Makespan, total energy and total tardiness of a feasible schedule."""

    makespan: int
    total_energy: int
    total_tardiness: int


def validate_dist(dist: DistSpec) -> list[str]:
    """Invariant violations of a distribution spec (empty list = valid)."""
    out = []
    if dist.kind not in DIST_KINDS:
        out.append(f"unknown distribution kind {dist.kind!r}")
        return out
    foreign = {
        "exponential": ("mu", "sigma", "a", "b"),
        "gaussian": ("lam", "a", "b"),
        "uniform": ("lam", "mu", "sigma"),
    }[dist.kind]
    for name in foreign:
        if getattr(dist, name) is not None:
            out.append(f"parameter {name!r} does not apply to {dist.kind}")
    if dist.lam is not None and not dist.lam > 0:
        out.append("lambda must be positive")
    if dist.sigma is not None and not dist.sigma > 0:
        out.append("sigma must be positive")
    if dist.a is not None and dist.b is not None and not dist.a < dist.b:
        out.append("uniform bounds must satisfy a < b")
    return out


def validate_params(params: InstanceParams) -> list[str]:
    """One entry per violated InstanceParams invariant; empty iff valid."""
    out = []
    if params.count < 1:
        out.append("count must be >= 1")
    if params.jobs < 1:
        out.append("jobs must be >= 1")
    if params.machines < 1:
        out.append("machines must be >= 1")
    if params.tasks_per_job < 1:
        out.append("tasks_per_job must be >= 1")
    if params.speeds < 1:
        out.append("speeds must be >= 1")
    if params.tasks_per_job > params.machines:
        out.append("tasks_per_job exceeds machines")
    lo, hi = params.base_time_range
    if lo < 1:
        out.append("base time lower bound must be >= 1")
    if lo > hi:
        out.append("base time lower bound exceeds upper bound")
    if not 0 <= params.seed <= MAX_SEED:
        out.append("seed must be a 64-bit unsigned integer")
    if params.rrdd not in RRDD_MODES:
        out.append(f"unknown rrdd mode {params.rrdd!r}")
    out.extend(validate_dist(params.dist))
    return out


def round6(x: float) -> float:
    """Round to 6 decimals, the serialization precision for reals."""
    return round(float(x), 6)


def relabel(instance: Instance, **metadata_changes) -> Instance:
    """Copy an instance with metadata fields replaced."""
    return replace(instance, metadata=replace(instance.metadata, **metadata_changes))
