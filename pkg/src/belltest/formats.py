"""Config and counts file formats, plus report rendering."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .errors import ParseError, ValidationError
from .predictor import CELL_KEYS, CountsTable, ExperimentParams, SettingAngles
from .quantum import EntangledPairState

REQUIRED_KEYS = ("r", "alpha1_deg", "alpha2_deg", "beta1_deg", "beta2_deg", "n_pairs", "eta_a", "eta_b")
OPTIONAL_KEYS = ("duration_s",)


@dataclass(frozen=True)
class ExperimentConfig:
    r: float
    alpha1_deg: float
    alpha2_deg: float
    beta1_deg: float
    beta2_deg: float
    n_pairs: float
    eta_a: float
    eta_b: float
    duration_s: Optional[float] = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None and not math.isfinite(v):
                raise ValidationError(f"{f.name}: value must be finite")
        if self.r < 0:
            raise ValidationError(f"r={self.r!r} violates bound r >= 0")
        if self.n_pairs < 0:
            raise ValidationError(f"n_pairs={self.n_pairs!r} violates bound n_pairs >= 0")
        for key in ("eta_a", "eta_b"):
            v = getattr(self, key)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{key}={v!r} violates bound [0, 1]")
        if self.duration_s is not None and self.duration_s <= 0:
            raise ValidationError(f"duration_s={self.duration_s!r} violates bound duration_s > 0")

    @property
    def state(self) -> EntangledPairState:
        return EntangledPairState(self.r)

    @property
    def params(self) -> ExperimentParams:
        return ExperimentParams(self.n_pairs, self.eta_a, self.eta_b, self.duration_s)

    @property
    def settings(self) -> SettingAngles:
        return SettingAngles(self.alpha1_deg, self.alpha2_deg, self.beta1_deg, self.beta2_deg)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name} = {v!r}")
        return "\n".join(lines) + "\n"


def _number(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"{key}: cannot parse {raw!r} as a number") from None


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _number(key, raw)
    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")
    return ExperimentConfig(**values)


def parse_counts(text: str, observed: bool = False) -> CountsTable:
    """Parse a ``quantity,value`` CSV holding the six Table-1 cells."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows or [c.strip() for c in rows[0]] != ["quantity", "value"]:
        raise ParseError("counts file must start with header 'quantity,value'")
    values: dict[str, float] = {}
    for r in rows[1:]:
        if len(r) != 2:
            raise ParseError(f"malformed row {','.join(r)!r}")
        key, raw = r[0].strip(), r[1].strip()
        if key not in CELL_KEYS:
            raise ParseError(f"unknown quantity {key!r}")
        if key in values:
            raise ParseError(f"duplicate quantity {key!r}")
        v = _number(key, raw)
        if not math.isfinite(v) or v < 0:
            raise ValidationError(f"{key}={raw} violates bound value >= 0")
        values[key] = v
    missing = [k for k in CELL_KEYS if k not in values]
    if missing:
        raise ParseError(f"missing quantities: {', '.join(missing)}")
    return CountsTable.from_array([values[k] for k in CELL_KEYS], observed=observed)


def _fmt_value(v: float) -> str:
    if float(v).is_integer() and abs(v) < 2**53:
        return str(int(v))
    return repr(float(v))


def format_counts(counts: CountsTable) -> str:
    lines = ["quantity,value"]
    lines += [f"{k},{_fmt_value(v)}" for k, v in counts.as_dict().items()]
    return "\n".join(lines) + "\n"


def thousands(v: float) -> str:
    """Table-1 display: value / 1000 to four significant digits."""
    return np.format_float_positional(v / 1000.0, precision=4, unique=False, fractional=False, trim="-")


def render_table(rows: dict[str, CountsTable]) -> str:
    head = ["", "S(a1)", "S(b1)", "C(a1,b1)", "C(a1,b2)", "C(a2,b1)", "C(a2,b2)"]
    body = [[label] + [thousands(v) for v in t.as_array()] for label, t in rows.items()]
    widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
    out = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in [head] + body]
    out.append("(counts x 1000)")
    return "\n".join(out) + "\n"
