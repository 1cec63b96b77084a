"""Matrix file formats.

JSON: ``{"n": 3, "entries": [[...], ...], "scale": 1e-4}``; ``scale`` is
optional and multiplies every entry on load. CSV: ``n`` rows of ``n``
comma-separated values, no header.
"""
import csv
import io as _io
import json
import os

import numpy as np

from .errors import MatrixFormatError


def _fmt(path):
    ext = os.path.splitext(str(path))[1].lower()
    return "csv" if ext in (".csv", ".txt") else "json"


def matrix_from_obj(obj, where="<inline>"):
    """Raw entries from a parsed JSON matrix object (or a bare list of rows)."""
    if isinstance(obj, list):
        obj = {"entries": obj}
    if not isinstance(obj, dict) or "entries" not in obj:
        raise MatrixFormatError(f"{where}: expected an object with 'entries'")
    try:
        a = np.array(obj["entries"], dtype=float)
        scale = float(obj.get("scale", 1.0))
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"{where}: non-numeric entries ({exc})") from None
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MatrixFormatError(f"{where}: entries are not a square matrix {a.shape}")
    if "n" in obj and int(obj["n"]) != a.shape[0]:
        raise MatrixFormatError(f"{where}: n={obj['n']} but entries are {a.shape}")
    return a * scale


def load_matrix(path):
    """Load raw (unvalidated) matrix entries from a JSON or CSV file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from None
    if _fmt(path) == "csv":
        try:
            rows = [[float(v) for v in row] for row in csv.reader(_io.StringIO(text)) if row]
            a = np.array(rows, dtype=float)
        except ValueError as exc:
            raise MatrixFormatError(f"{path}: {exc}") from None
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixFormatError(f"{path}: not a square matrix")
        return a
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_obj(obj, str(path))


def load_vector(path):
    """Load a vector: JSON list, ``{"x": [...]}``, or one CSV row/column."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from None
    try:
        if _fmt(path) == "csv":
            vals = [float(v) for row in csv.reader(_io.StringIO(text)) for v in row if v.strip()]
        else:
            obj = json.loads(text)
            vals = obj["x"] if isinstance(obj, dict) else obj
        x = np.array(vals, dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise MatrixFormatError(f"{path}: cannot parse vector ({exc})") from None
    if x.ndim != 1:
        raise MatrixFormatError(f"{path}: expected a flat vector")
    return x


def matrix_to_obj(a, scale=1.0):
    """JSON-ready object; entries are divided by ``scale`` and it is recorded."""
    a = np.asarray(a, dtype=float)
    obj = {"n": int(a.shape[0]), "entries": (a / scale).tolist()}
    if scale != 1.0:
        obj["scale"] = scale
    return obj


def dumps_matrix(a, fmt="json", scale=1.0, digits=17):
    """Serialize a matrix; with ``digits=17`` floats round-trip exactly."""
    a = np.asarray(a, dtype=float) / scale
    if fmt == "csv":
        return "\n".join(",".join(f"{v:.{digits}g}" for v in row) for row in a) + "\n"
    obj = {"n": int(a.shape[0]),
           "entries": [[float(f"{v:.{digits}g}") for v in row] for row in a]}
    if scale != 1.0:
        obj["scale"] = scale
    return json.dumps(obj)


def save_matrix(path, a, scale=1.0):
    with open(path, "w") as fh:
        fh.write(dumps_matrix(a, _fmt(path), scale))


def load_completion_spec(path):
    """Parse a completion spec file into keyword arguments.

    ``base`` may be a path (resolved relative to the spec file), an inline
    matrix object, or a bare list of rows.
    """
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFormatError(f"{path}: {exc}") from None
    if not isinstance(obj, dict) or "base" not in obj:
        raise MatrixFormatError(f"{path}: completion spec needs a 'base'")
    base = obj["base"]
    if isinstance(base, str):
        ref = base if os.path.isabs(base) else os.path.join(os.path.dirname(str(path)), base)
        base = load_matrix(ref)
    else:
        base = matrix_from_obj(base, f"{path}:base")
    try:
        pinned = {(int(p["i"]), int(p["j"])): float(p["value"]) for p in obj.get("pinned", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"{path}: bad pinned entry ({exc})") from None
    out = {
        "base": base,
        "pinned": pinned,
        "preserve_determinant": bool(obj.get("preserve_determinant", True)),
    }
    for key in ("restarts", "seed"):
        if key in obj:
            out[key] = int(obj[key])
    return out
