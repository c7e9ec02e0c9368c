"""JSON matrix format and deterministic JSON output.

Matrices are ``{"rows": N, "cols": M, "entries": [[e, ...], ...]}`` in
row-major order, where a complex entry is a pair ``[re, im]`` and a real
entry a plain number. Floats are written with 17 significant digits, which
round-trips IEEE doubles exactly and keeps regression files stable.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError


def _entry(e):
    if isinstance(e, (list, tuple)):
        if len(e) != 2:
            raise InputError(f"complex entry must be [re, im], got {e!r}")
        return complex(float(e[0]), float(e[1]))
    if isinstance(e, bool) or not isinstance(e, (int, float)):
        raise InputError(f"bad matrix entry {e!r}")
    return float(e)


def matrix_from_json(obj) -> np.ndarray:
    """Parse the matrix format; complex dtype iff any entry is a pair."""
    if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= obj.keys():
        raise InputError("matrix JSON needs 'rows', 'cols' and 'entries'")
    rows, cols = obj["rows"], obj["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InputError("rows and cols must be positive integers")
    raw = obj["entries"]
    if not isinstance(raw, list):
        raise InputError("entries must be a list")
    # nested rows, or one flat row-major list; a row has ``cols`` items and a
    # complex pair has two, so the two layouts cannot be confused
    if len(raw) == rows and all(isinstance(r, list) and len(r) == cols for r in raw):
        flat = [e for r in raw for e in r]
    elif len(raw) == rows * cols:
        flat = raw
    else:
        raise InputError(f"entries do not match a {rows}x{cols} matrix")
    vals = [_entry(e) for e in flat]
    if not all(math.isfinite(abs(v)) for v in vals):
        raise InputError("matrix entries must be finite")
    is_complex = any(isinstance(e, (list, tuple)) for e in flat)
    arr = np.array(vals, dtype=complex if is_complex else float).reshape(rows, cols)
    return arr


def matrix_to_json(A) -> dict:
    A = np.atleast_2d(np.asarray(A))
    if np.iscomplexobj(A):
        entries = [[[float(z.real), float(z.imag)] for z in row] for row in A]
    else:
        entries = [[float(x) for x in row] for row in A]
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "entries": entries}


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def load_spec_json(obj) -> dict:
    """``{"A": matrix, "B": matrix, "S": matrix, "d": int}`` to arrays (B optional)."""
    if not isinstance(obj, dict) or "A" not in obj or "S" not in obj:
        raise InputError("operator spec needs at least 'A' and 'S'")
    out = {"A": matrix_from_json(obj["A"]), "S": matrix_from_json(obj["S"])}
    out["B"] = matrix_from_json(obj["B"]) if obj.get("B") is not None else None
    d = obj.get("d", out["S"].shape[0])
    if not isinstance(d, int):
        raise InputError("d must be an integer")
    out["d"] = d
    return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def _encode(obj, indent, level) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[" + sep.join(items) + end + "]"
    if isinstance(obj, float):
        # JSON has no infinities or NaN; they are written as null
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g") if obj != int(obj) or abs(obj) >= 1e17 else repr(obj)
    return json.dumps(obj)


def dumps(obj, indent: int | None = 2) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    return _encode(_plain(obj), indent, 0)
