"""Versioned report records and deterministic JSON/CSV rendering.

Reports must be byte-identical across runs for the same inputs and seed, so
floats are always rendered through one fixed formatter (12 significant
digits, round-half-even) and dict key order is the construction order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

SCHEMA = "locc-lab/1"


@dataclass(frozen=True)
class Check:
    """One named numeric verification: passes iff margin >= -tolerance."""

    name: str
    passed: bool
    margin: float
    tolerance: float

    @classmethod
    def from_margin(cls, name: str, margin: float, tolerance: float) -> "Check":
        margin = float(margin)
        return cls(name, margin >= -tolerance, margin, float(tolerance))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": float(self.margin),
            "tolerance": float(self.tolerance),
        }


def report_dict(command: str, inputs: dict, results: dict, checks: list[Check], seed: int | None) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "seed": seed,
        "inputs": inputs,
        "results": results,
        "checks": [c.as_dict() for c in checks],
    }


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value in report: {x}")
    if x == 0.0:
        return "0"
    return format(x, ".12g")


def matrix_json(arr) -> list:
    """Nested rows of [re, im] pairs."""
    a = np.asarray(arr, dtype=complex)
    if a.ndim == 1:
        return [[float(v.real), float(v.imag)] for v in a]
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def render_json(value) -> str:
    """Deterministic JSON text: insertion-ordered keys, fixed float format."""
    parts: list[str] = []
    _render(value, parts)
    return "".join(parts)


def _render(value, parts: list[str]) -> None:
    if value is None or isinstance(value, bool):
        parts.append(json.dumps(value))
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        parts.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        parts.append(format_float(float(value)))
    elif isinstance(value, dict):
        parts.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                parts.append(", ")
            parts.append(json.dumps(str(key)))
            parts.append(": ")
            _render(item, parts)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(value):
            if i:
                parts.append(", ")
            _render(item, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot render {type(value).__name__} deterministically")


def render_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append(format_float(float(cell)))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
