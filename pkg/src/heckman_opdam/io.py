"""Deterministic JSON and CSV output.

JSON is written with sorted keys and floats in 17 significant digits so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

__all__ = ["dumps", "format_float", "write_samples_csv", "read_samples_csv"]


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        # JSON has no literal for these; keep files parseable by Python's json
        return "NaN" if math.isnan(x) else ("Infinity" if x > 0 else "-Infinity")
    return format(x, ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_quote(str(k))}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, complex):
        return _encode({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, str):
        return _quote(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _quote(s: str) -> str:
    import json

    return json.dumps(s)


def dumps(obj, indent: int = 1) -> str:
    return _encode(obj, indent, 0) + "\n"


def write_samples_csv(path, nodes: np.ndarray, values: np.ndarray) -> None:
    """One row per node: Cartesian coordinates, then ``re, im``."""
    rank = nodes.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{k}" for k in range(rank)] + ["re", "im"])
        for x, v in zip(nodes, values):
            w.writerow([format_float(c) for c in x] + [format_float(v.real), format_float(v.imag)])


def read_samples_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header, body = rows[0], rows[1:]
    if header[-2:] != ["re", "im"]:
        raise ValueError(f"{path}: expected columns x0..,re,im")
    data = np.array([[float(v) for v in r] for r in body if r], dtype=float)
    rank = len(header) - 2
    return data[:, :rank], data[:, rank] + 1j * data[:, rank + 1]
