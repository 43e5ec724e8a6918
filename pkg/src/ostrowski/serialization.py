"""Number formatting shared by the JSON and CSV writers."""
from __future__ import annotations

import math

SIGNIFICANT_DIGITS = 15


def num(value):
    """Round to 15 significant digits; the repr of the result re-parses exactly."""
    if value is None or isinstance(value, bool) or isinstance(value, int):
        return value
    value = float(value)
    if not math.isfinite(value):
        return value
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(num(value))
    return str(value)


def tidy(obj):
    """Recursively round every float inside dicts and lists for JSON output."""
    if isinstance(obj, dict):
        return {k: tidy(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [tidy(v) for v in obj]
    if isinstance(obj, float):
        # JSON has no infinities; an infeasible branch serialises as null
        return num(obj) if math.isfinite(obj) else None
    return obj
