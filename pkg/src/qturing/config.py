"""Run-configuration documents.

One ``key = value`` pair per line; ``#`` starts a comment.  Keys:

    preset        zeno | coin | cat          (sets the angles; uses M, default 4)
    M             number of memory cells
    angles        comma-separated angles, e.g. ``pi/2, 0, 2pi/8, 0.3``
    cycle_angles  per-cycle angle lists separated by ``;`` (optional)
    g             coupling constant, default 1
    cycles        number of cycles (run: default 1; verify: default = period)
    indices       ``standard`` or comma-separated digit strings like 33000
    output        output path (relative paths honour $QTURING_OUTPUT_DIR)
    format        csv | json (default: from the output suffix, else csv)
    seed          integer seed for randomized verification machines
    trials        number of extra random machines checked by ``verify``

Angles written with ``pi`` are kept exact: ``pi/3`` is one sixth of a turn.
Bare numbers are radians, except ``0`` which is exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .clusterops import ClusterIndex, cluster_index
from .errors import ConfigError
from .machine import MAX_M, PRESETS, Angle, MachineSpec

KEYS = (
    "preset", "M", "angles", "cycle_angles", "g", "cycles",
    "indices", "output", "format", "seed", "trials",
)

_PI_ANGLE = re.compile(r"^([+-]?)(\d+)?\s*\*?\s*(?:pi|π)\s*(?:/\s*(\d+))?$")


def parse_angle(text: str) -> Angle:
    s = text.strip()
    match = _PI_ANGLE.match(s)
    if match:
        sign, num, den = match.groups()
        value = Fraction(int(num or 1), 2 * int(den or 1))
        return -value if sign == "-" else value
    try:
        value = float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None
    return Fraction(0) if value == 0 else value


@dataclass
class RunConfig:
    spec: MachineSpec
    cycles: Optional[int] = None
    indices: Union[str, list[ClusterIndex]] = "standard"
    output: Optional[str] = None
    format: Optional[str] = None
    seed: int = 0
    trials: int = 0
    preset: Optional[str] = None


def _int(raw: dict, key: str, minimum: int) -> int:
    value, line = raw[key]
    try:
        out = int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}", line) from None
    if out < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {out}", line)
    return out


def _angles(value: str, line: int) -> tuple[Angle, ...]:
    try:
        return tuple(parse_angle(part) for part in value.split(","))
    except ValueError as exc:
        raise ConfigError(str(exc), line) from None


def parse_config(text: str) -> RunConfig:
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        raw[key] = (value, lineno)

    M = _int(raw, "M", 1) if "M" in raw else None
    if M is not None and M > MAX_M:
        raise ConfigError(f"M must be <= {MAX_M}", raw["M"][1])

    preset = None
    if "angles" in raw:
        angles = _angles(*raw["angles"])
        if M is not None and len(angles) != M:
            raise ConfigError(f"{len(angles)} angles given for M = {M}", raw["angles"][1])
        if "preset" in raw:
            raise ConfigError("give either 'preset' or 'angles', not both", raw["angles"][1])
    elif "preset" in raw:
        preset, lineno = raw["preset"]
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} (choose from {', '.join(PRESETS)})", lineno)
        angles = PRESETS[preset](M or 4).angles
    else:
        raise ConfigError("missing field: 'angles' or 'preset'")

    g = 1.0
    if "g" in raw:
        value, lineno = raw["g"]
        try:
            g = float(value)
        except ValueError:
            raise ConfigError(f"g must be a number, got {value!r}", lineno) from None
        if g <= 0:
            raise ConfigError("g must be positive", lineno)

    cycle_angles = None
    if "cycle_angles" in raw:
        value, lineno = raw["cycle_angles"]
        cycle_angles = tuple(_angles(row, lineno) for row in value.split(";"))
        if any(len(row) != len(angles) for row in cycle_angles):
            raise ConfigError("every cycle_angles row needs M entries", lineno)

    indices: Union[str, list[ClusterIndex]] = "standard"
    if "indices" in raw:
        value, lineno = raw["indices"]
        if value != "standard":
            try:
                indices = [cluster_index(part.strip()) for part in value.split(",")]
            except ValueError as exc:
                raise ConfigError(str(exc), lineno) from None
            bad = [q for q in indices if len(q) != len(angles) + 1]
            if bad:
                raise ConfigError(f"indices must have {len(angles) + 1} digits", lineno)

    fmt = None
    if "format" in raw:
        fmt, lineno = raw["format"]
        if fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {fmt!r}", lineno)

    spec = MachineSpec(angles, g=g, cycle_angles=cycle_angles, name=preset or "custom")
    return RunConfig(
        spec=spec,
        cycles=_int(raw, "cycles", 1) if "cycles" in raw else None,
        indices=indices,
        output=raw["output"][0] if "output" in raw else None,
        format=fmt,
        seed=_int(raw, "seed", 0) if "seed" in raw else 0,
        trials=_int(raw, "trials", 0) if "trials" in raw else 0,
        preset=preset,
    )
