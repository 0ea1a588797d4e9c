"""Canonical JSON serialization for reports.

Keys are sorted, floats carry 17 significant digits (lossless for
float64), and the output is compact, so parsing a report and
re-serializing it reproduces the bytes exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import NumericalError


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise NumericalError(f"reports may not contain non-finite values, got {x}")
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def canonical(obj) -> str:
    """Serialize to the canonical compact JSON form."""
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        body = ",".join(f"{json.dumps(str(k))}:{canonical(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(canonical(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


def dumps(obj) -> str:
    """Canonical JSON plus a trailing newline."""
    return canonical(obj) + "\n"
