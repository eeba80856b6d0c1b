"""JSON, CSV and SVG writers for command output.

JSON keys are sorted and floats use Python's shortest round-trip repr, so
identical inputs give byte-identical files.  Non-finite floats become the
strings "nan", "inf", "-inf" (strict JSON has no literal for them).
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

SCHEMA_VERSION = "1.0"


def to_jsonable(obj):
    """Recursively convert results into plain JSON types."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if is_dataclass(obj):
        return to_jsonable(asdict(obj))
    # mpmath numbers and the like
    try:
        return to_jsonable(complex(obj)) if getattr(obj, "imag", 0) else to_jsonable(float(obj))
    except (TypeError, ValueError):
        return str(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    v = to_jsonable(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return json.dumps(v)
    return v


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(header, rows))


# --------------------------------------------------------------------------
# SVG zero maps

SIZE = 800
EXTENT = 2.5


def _px(x: float, y: float) -> tuple[float, float]:
    k = SIZE / (2 * EXTENT)
    return (x + EXTENT) * k, (EXTENT - y) * k


def zero_map_svg(points: Iterable[complex], title: str = "") -> str:
    """Scatter of complex points on [-2.5, 2.5]^2 with the three unit reference circles dashed."""
    k = SIZE / (2 * EXTENT)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>')
    cx, cy = _px(0, 0)
    out.append(f'<line class="axis" x1="0" y1="{cy:g}" x2="{SIZE}" y2="{cy:g}" stroke="#888" stroke-width="1"/>')
    out.append(f'<line class="axis" x1="{cx:g}" y1="0" x2="{cx:g}" y2="{SIZE}" stroke="#888" stroke-width="1"/>')
    for c in (-1, 0, 1):
        x, y = _px(c, 0)
        out.append(f'<circle class="reference" cx="{x:g}" cy="{y:g}" r="{k:g}" fill="none" '
                   f'stroke="#555" stroke-width="1" stroke-dasharray="6,4"/>')
    for z in points:
        z = complex(z)
        if abs(z.real) > EXTENT or abs(z.imag) > EXTENT:
            continue
        x, y = _px(z.real, z.imag)
        out.append(f'<circle class="root" cx="{x:.3f}" cy="{y:.3f}" r="3" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(path, points, title="") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(zero_map_svg(points, title))
