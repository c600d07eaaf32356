"""Canonical structured-text dialect shared by scenes, configs, traces, logs.

The on-disk form is JSON restricted to a canonical rendering: object keys
sorted, floats as 6-decimal fixed point, -0.0 normalized to 0.0. Files
written through this module round-trip byte-identically, which is what
makes golden-log diffing and save/load identity tests possible.
"""
from __future__ import annotations

import json
import math
from typing import Any


class DocumentError(ValueError):
    """Malformed or invariant-violating document."""

    def __init__(self, message: str, locus: str = ""):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise DocumentError(f"non-finite number {x!r}")
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return f"{x:.6f}"


def _emit(obj: Any, out: list[str], indent: int, pretty: bool) -> None:
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None or isinstance(obj, bool):
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            if not isinstance(k, str):
                raise DocumentError(f"non-string key {k!r}")
            out.append(("\n" + pad_in) if pretty else "")
            out.append(json.dumps(k, ensure_ascii=False))
            out.append(": " if pretty else ":")
            _emit(obj[k], out, indent + 1, pretty)
            if i < len(keys) - 1:
                out.append(",")
        out.append(("\n" + pad + "}") if pretty else "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            out.append(("\n" + pad_in) if pretty else "")
            _emit(v, out, indent + 1, pretty)
            if i < len(obj) - 1:
                out.append(",")
        out.append(("\n" + pad + "]") if pretty else "]")
    else:
        raise DocumentError(f"unsupported value type {type(obj).__name__}")


def dumps_canonical(obj: Any, pretty: bool = True) -> str:
    """Render an object tree in the canonical dialect (trailing newline)."""
    out: list[str] = []
    _emit(obj, out, 0, pretty)
    return "".join(out) + "\n"


def dumps_line(obj: Any) -> str:
    """Compact single-line rendering (log/trace records), no newline."""
    out: list[str] = []
    _emit(obj, out, 0, pretty=False)
    return "".join(out)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"parse error: {e.msg}", locus=f"line {e.lineno}") from e


def require(cond: bool, message: str, locus: str = "") -> None:
    if not cond:
        raise DocumentError(message, locus)


def get_field(obj: dict, key: str, locus: str) -> Any:
    if key not in obj:
        raise DocumentError(f"missing field '{key}'", locus)
    return obj[key]
