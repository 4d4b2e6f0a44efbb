"""Deterministic JSON rendering with fixed six-decimal floats.

Report files must be byte-identical across runs, so floats are always
rendered as %.6f (negative zero normalised) and key order is the
insertion order of the dicts handed in. Only JSON-native types are
accepted; callers convert enums and arrays first.
"""

from __future__ import annotations

import json
import math
from typing import Any, List


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _write(obj: Any, out: List[str], level: int, indent: int) -> None:
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad)
            _write(item, out, level + 1, indent)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(closing + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (key, value) in enumerate(items):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(pad + json.dumps(key, ensure_ascii=False) + ": ")
            _write(value, out, level + 1, indent)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(closing + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} value {obj!r}")


def dumps_fixed(obj: Any, indent: int = 2) -> str:
    """Render obj as deterministic JSON text ending in a newline."""
    out: List[str] = []
    _write(obj, out, 0, indent)
    out.append("\n")
    return "".join(out)
