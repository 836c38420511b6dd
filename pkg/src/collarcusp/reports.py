"""Deterministic CSV/JSON report emission and tolerance profiles.

CSV files start with a versioned schema comment line ``#schema=name,v1``
followed by an RFC-4180 header and rows; floats are written with shortest
round-trip precision so identical configurations produce byte-identical
files.  Human-readable output rounds to 6 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

#: Environment variable selecting a tolerance profile by name.
PROFILE_ENV_VAR = "COLLARCUSP_PROFILE"


@dataclass(frozen=True)
class ToleranceProfile:
    name: str
    quad_abs: float
    quad_rel: float
    ode_rtol: float
    ode_atol: float

    def __post_init__(self) -> None:
        for value in (self.quad_abs, self.quad_rel, self.ode_rtol, self.ode_atol):
            if not value > 0.0:
                raise ValueError(f"tolerances must be positive, got {value}")


PROFILES = {
    "default": ToleranceProfile("default", 1e-12, 1e-10, 1e-12, 1e-14),
    "strict": ToleranceProfile("strict", 1e-13, 1e-11, 1e-13, 1e-15),
    "fast": ToleranceProfile("fast", 1e-9, 1e-8, 1e-8, 1e-10),
}


def get_profile(name: str | None = None) -> ToleranceProfile:
    """Resolve a tolerance profile; the environment variable overrides the default."""
    if name is None:
        name = os.environ.get(PROFILE_ENV_VAR, "default")
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(
            f"unknown tolerance profile {name!r}; available: {sorted(PROFILES)}"
        ) from None


def format_value(x: object) -> str:
    """Full-precision, round-trippable text for CSV cells."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return repr(x)
    return str(x)


def format_human(x: object) -> str:
    """6 significant digits for console output."""
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def render_csv(schema: str, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    buf.write(f"#schema={schema},v1\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(x) for x in row])
    return buf.getvalue()


def write_csv(path: str, schema: str, columns: Sequence[str],
              rows: Iterable[Sequence[object]]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(render_csv(schema, columns, rows))


def write_json(path: str, payload: object) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
