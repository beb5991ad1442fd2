"""Canonical text serialization of instances, suite manifests, curve tables.

The `.ejsp` text form (documented in FORMAT.md) is the round-trip authority:
fixed key order, reals at 6 decimals, integers bare, LF line endings, output
a pure function of the instance. A JSON export is provided for interop but
is one-way.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from ejsp.model import (
    DistSpec,
    Instance,
    InstanceMetadata,
    InstanceParams,
    SpeedGrid,
    TaskSpec,
)
from ejsp.speed import energy_percentage, time_fraction

HEADER_KEYS = (
    "jobs",
    "machines",
    "tasks",
    "speeds",
    "multipliers",
    "seed",
    "index",
    "dist",
    "rrdd",
    "variant",
    "prng",
    "version",
)

UNBOUNDED_TOKEN = "inf"


class ParseError(ValueError):
    """Malformed instance text; carries the 1-based offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(ValueError):
    """Well-formed text whose payload breaks instance invariants."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid instance: " + "; ".join(violations))
        self.violations = violations


def _fmt_real(x: float) -> str:
    return f"{x:.6f}"


def _dist_tokens(dist: DistSpec) -> list[str]:
    return [dist.kind] + [f"{name}={_fmt_real(value)}" for name, value in dist.params()]


def _variant_from_tag(tag: str, line: int) -> tuple[bool, Optional[tuple[int, ...]]]:
    if tag == "orig":
        return False, None
    relaxed = False
    subset: Optional[tuple[int, ...]] = None
    for part in tag.split("+"):
        if part == "relaxed" and not relaxed:
            relaxed = True
        elif part.startswith("s") and subset is None:
            try:
                ordinals = [int(tok) for tok in part[1:].split("-")]
            except ValueError:
                raise ParseError(line, f"bad variant tag {tag!r}") from None
            if any(o < 1 for o in ordinals):
                raise ParseError(line, f"bad variant tag {tag!r}")
            subset = tuple(o - 1 for o in ordinals)
        else:
            raise ParseError(line, f"bad variant tag {tag!r}")
    return relaxed, subset


def write_instance(instance: Instance) -> bytes:
    """Canonical `.ejsp` bytes for an instance."""
    meta = instance.metadata
    lines = [
        f"jobs {instance.n_jobs}",
        f"machines {instance.machines}",
        f"tasks {instance.n_tasks_per_job}",
        f"speeds {instance.n_speeds}",
        "multipliers "
        + " ".join(_fmt_real(x) for x in instance.speed_multipliers.multipliers),
        f"seed {meta.seed}",
        f"index {meta.instance_index}",
        "dist " + " ".join(_dist_tokens(meta.dist)),
        f"rrdd {meta.rrdd}",
        f"variant {meta.variant_tag}",
        f"prng {meta.prng_id}",
        f"version {meta.generator_version}",
    ]
    for task in instance.iter_tasks():
        due = UNBOUNDED_TOKEN if task.due is None else str(task.due)
        fields = [
            str(task.job),
            str(task.position),
            str(task.machine),
            str(task.base_time),
            str(task.release),
            due,
            *map(str, task.times),
            *map(str, task.energies),
        ]
        lines.append(" ".join(fields))
    return ("\n".join(lines) + "\n").encode("ascii")


class _Cursor:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        # canonical form ends with one LF, leaving a trailing empty piece
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    @property
    def line_no(self) -> int:
        return self.pos + 1

    def next_line(self, what: str) -> str:
        if self.pos >= len(self.lines):
            raise ParseError(self.pos + 1, f"unexpected end of file, expected {what}")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def done(self) -> bool:
        return self.pos >= len(self.lines)


def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line, f"bad integer for {what}: {token!r}") from None


def _parse_real(token: str, line: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(line, f"bad real for {what}: {token!r}") from None


def _header(cur: _Cursor, key: str) -> list[str]:
    line_no = cur.line_no
    line = cur.next_line(f"header {key!r}")
    parts = line.split(" ")
    if not parts or parts[0] != key:
        raise ParseError(line_no, f"expected header {key!r}, got {line!r}")
    if len(parts) < 2:
        raise ParseError(line_no, f"header {key!r} has no value")
    return parts[1:]


def read_instance(data: Union[bytes, str]) -> Instance:
    """Parse canonical text back into an Instance.

    Raises ParseError (with line number) for malformed syntax and
    ValidationError for payloads that break instance invariants.
    """
    text = data.decode("ascii") if isinstance(data, bytes) else data
    cur = _Cursor(text)

    n_jobs = _parse_int(_header(cur, "jobs")[0], cur.line_no - 1, "jobs")
    machines = _parse_int(_header(cur, "machines")[0], cur.line_no - 1, "machines")
    n_tasks = _parse_int(_header(cur, "tasks")[0], cur.line_no - 1, "tasks")
    n_speeds = _parse_int(_header(cur, "speeds")[0], cur.line_no - 1, "speeds")

    mult_line = cur.line_no
    mult_tokens = _header(cur, "multipliers")
    if len(mult_tokens) != n_speeds:
        raise ParseError(
            mult_line, f"expected {n_speeds} multipliers, got {len(mult_tokens)}"
        )
    multipliers = tuple(
        _parse_real(tok, mult_line, "multiplier") for tok in mult_tokens
    )

    seed = _parse_int(_header(cur, "seed")[0], cur.line_no - 1, "seed")
    index = _parse_int(_header(cur, "index")[0], cur.line_no - 1, "index")

    dist_line = cur.line_no
    dist_tokens = _header(cur, "dist")
    kind = dist_tokens[0]
    dist_kwargs = {}
    for tok in dist_tokens[1:]:
        name, eq, value = tok.partition("=")
        if eq != "=" or name not in ("lam", "mu", "sigma", "a", "b"):
            raise ParseError(dist_line, f"bad distribution parameter {tok!r}")
        dist_kwargs[name] = _parse_real(value, dist_line, name)
    dist = DistSpec(kind, **dist_kwargs)

    rrdd = _header(cur, "rrdd")[0]
    variant_line = cur.line_no
    relaxed, subset = _variant_from_tag(_header(cur, "variant")[0], variant_line)
    prng_id = _header(cur, "prng")[0]
    version = _header(cur, "version")[0]

    routes: list[list[TaskSpec]] = [[] for _ in range(max(n_jobs, 0))]
    for j in range(n_jobs):
        for p in range(n_tasks):
            line_no = cur.line_no
            line = cur.next_line(f"task line for job {j} position {p}")
            tokens = line.split(" ")
            if len(tokens) != 6 + 2 * n_speeds:
                raise ParseError(
                    line_no,
                    f"expected {6 + 2 * n_speeds} fields on task line, got {len(tokens)}",
                )
            tj = _parse_int(tokens[0], line_no, "job")
            tp = _parse_int(tokens[1], line_no, "position")
            if tj != j or tp != p:
                raise ParseError(
                    line_no, f"task lines out of order: expected job {j} position {p}"
                )
            due_tok = tokens[5]
            due = (
                None
                if due_tok == UNBOUNDED_TOKEN
                else _parse_int(due_tok, line_no, "due")
            )
            routes[j].append(
                TaskSpec(
                    job=tj,
                    position=tp,
                    machine=_parse_int(tokens[2], line_no, "machine"),
                    base_time=_parse_int(tokens[3], line_no, "base time"),
                    release=_parse_int(tokens[4], line_no, "release"),
                    due=due,
                    times=tuple(
                        _parse_int(t, line_no, "time") for t in tokens[6 : 6 + n_speeds]
                    ),
                    energies=tuple(
                        _parse_int(t, line_no, "energy")
                        for t in tokens[6 + n_speeds :]
                    ),
                )
            )
    if not cur.done():
        raise ParseError(cur.line_no, "unexpected trailing content")

    instance = Instance(
        jobs=tuple(tuple(route) for route in routes),
        machines=machines,
        speed_multipliers=SpeedGrid(multipliers),
        metadata=InstanceMetadata(
            seed=seed,
            instance_index=index,
            dist=dist,
            rrdd=rrdd,
            generator_version=version,
            prng_id=prng_id,
            dates_relaxed=relaxed,
            speed_subset=subset,
        ),
    )
    from ejsp.evaluate import validate_instance

    violations = validate_instance(instance)
    if violations:
        raise ValidationError(violations)
    return instance


def read_instance_file(path: Union[str, Path]) -> Instance:
    return read_instance(Path(path).read_bytes())


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    index: int
    variant: str
    sha256: str


@dataclass(frozen=True)
class SuiteManifest:
    suite_id: str
    params: Optional[dict]
    generator_version: str
    entries: tuple[ManifestEntry, ...]


def instance_file_name(instance: Instance) -> str:
    meta = instance.metadata
    return f"inst_{meta.instance_index:04d}_{meta.variant_tag}.ejsp"


def params_echo(params: InstanceParams) -> dict:
    echo = asdict(params)
    echo["dist"] = {"kind": params.dist.kind, **dict(params.dist.params())}
    echo["base_time_range"] = list(params.base_time_range)
    return echo


def write_suite(
    instances: Sequence[Instance],
    directory: Union[str, Path],
    suite_id: str = "suite",
    params: Optional[Union[InstanceParams, dict]] = None,
) -> SuiteManifest:
    """Write one `.ejsp` file per instance plus `manifest.json`.

    Files are named inst_{index:04d}_{variant}.ejsp; the manifest records a
    sha256 digest of each file's bytes, in the given instance order.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if isinstance(params, InstanceParams):
        params = params_echo(params)

    entries = []
    seen = set()
    for instance in instances:
        name = instance_file_name(instance)
        if name in seen:
            raise ValueError(f"duplicate instance file name {name}")
        seen.add(name)
        payload = write_instance(instance)
        (directory / name).write_bytes(payload)
        entries.append(
            ManifestEntry(
                file=name,
                index=instance.metadata.instance_index,
                variant=instance.metadata.variant_tag,
                sha256=hashlib.sha256(payload).hexdigest(),
            )
        )

    from ejsp._version import __version__

    manifest = SuiteManifest(
        suite_id=suite_id,
        params=params,
        generator_version=__version__,
        entries=tuple(entries),
    )
    (directory / "manifest.json").write_bytes(
        (json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n").encode("ascii")
    )
    return manifest


def read_manifest(directory: Union[str, Path]) -> SuiteManifest:
    raw = json.loads((Path(directory) / "manifest.json").read_text("ascii"))
    return SuiteManifest(
        suite_id=raw["suite_id"],
        params=raw["params"],
        generator_version=raw["generator_version"],
        entries=tuple(ManifestEntry(**e) for e in raw["entries"]),
    )


def read_suite(directory: Union[str, Path]) -> list[Instance]:
    """All instances under a directory, manifest order if present."""
    directory = Path(directory)
    if (directory / "manifest.json").exists():
        manifest = read_manifest(directory)
        return [read_instance_file(directory / e.file) for e in manifest.entries]
    return [read_instance_file(p) for p in sorted(directory.glob("*.ejsp"))]


def instance_to_json(instance: Instance) -> str:
    """Structured one-way JSON export; the text form stays authoritative."""
    meta = instance.metadata
    doc = {
        "jobs": [
            [
                {
                    "job": t.job,
                    "position": t.position,
                    "machine": t.machine,
                    "base_time": t.base_time,
                    "release": t.release,
                    "due": t.due,
                    "times": list(t.times),
                    "energies": list(t.energies),
                }
                for t in route
            ]
            for route in instance.jobs
        ],
        "machines": instance.machines,
        "speed_multipliers": list(instance.speed_multipliers.multipliers),
        "metadata": {
            "seed": meta.seed,
            "instance_index": meta.instance_index,
            "dist": {"kind": meta.dist.kind, **dict(meta.dist.params())},
            "rrdd": meta.rrdd,
            "generator_version": meta.generator_version,
            "prng_id": meta.prng_id,
            "variant": meta.variant_tag,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def export_curves() -> tuple[list[tuple[int, int]], list[tuple[float, float]]]:
    """The two calibration curve tables.

    Energy percentage at x = 0..100 (101 rows) and time fraction at
    x = 0.50, 0.51, ..., 3.00 (251 rows, values at 6 decimals).
    """
    table_energy = [(x, energy_percentage(x)) for x in range(101)]
    table_time = []
    for i in range(251):
        x = (50 + i) / 100.0
        table_time.append((x, round(time_fraction(x), 6)))
    return table_energy, table_time


def write_curves(directory: Union[str, Path]) -> tuple[Path, Path]:
    """Write the curve tables as CSV (`x,value` header, LF endings)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    table_energy, table_time = export_curves()
    energy_path = directory / "energy_percentage.csv"
    time_path = directory / "time_fraction.csv"
    energy_path.write_bytes(
        ("x,value\n" + "".join(f"{x},{v}\n" for x, v in table_energy)).encode("ascii")
    )
    time_path.write_bytes(
        (
            "x,value\n" + "".join(f"{x:.2f},{v:.6f}\n" for x, v in table_time)
        ).encode("ascii")
    )
    return energy_path, time_path
