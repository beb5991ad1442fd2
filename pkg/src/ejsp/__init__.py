"""Deterministic instance generator and evaluation toolkit for job-shop
scheduling with speed-scalable machines."""

from ejsp._version import __version__
from ejsp.evaluate import (
    brute_force_best,
    objectives,
    suite_stats,
    validate_instance,
    validate_schedule,
)
from ejsp.generator import generate_instance, generate_suite
from ejsp.io import (
    ParseError,
    ValidationError,
    read_instance,
    read_instance_file,
    read_suite,
    write_instance,
    write_suite,
)
from ejsp.model import (
    DistSpec,
    Instance,
    InstanceMetadata,
    InstanceParams,
    ObjectiveReport,
    Schedule,
    SpeedGrid,
    TaskSpec,
    validate_params,
)
from ejsp.rng import Stream, make_stream
from ejsp.solver import SolverConfig, dispatch, improve
from ejsp.speed import energy_percentage, scale_task, speed_grid, time_fraction
from ejsp.variants import paper_variants, project_speeds, relax_dates

__all__ = [
    "__version__",
    "DistSpec",
    "Instance",
    "InstanceMetadata",
    "InstanceParams",
    "ObjectiveReport",
    "ParseError",
    "Schedule",
    "SolverConfig",
    "SpeedGrid",
    "Stream",
    "TaskSpec",
    "ValidationError",
    "brute_force_best",
    "dispatch",
    "energy_percentage",
    "generate_instance",
    "generate_suite",
    "improve",
    "make_stream",
    "objectives",
    "paper_variants",
    "project_speeds",
    "read_instance",
    "read_instance_file",
    "read_suite",
    "relax_dates",
    "scale_task",
    "speed_grid",
    "suite_stats",
    "time_fraction",
    "validate_instance",
    "validate_params",
    "validate_schedule",
    "write_instance",
    "write_suite",
]
