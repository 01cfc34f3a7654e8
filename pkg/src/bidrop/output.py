"""Deterministic artifact emission: CSV and JSON, written atomically.

Numbers are rendered with 17 significant digits so files round-trip to
the exact double and runs with identical configuration are
byte-identical.  Files are written to a temporary sibling and renamed
into place, so an interrupted run never leaves a partial file.
"""

from __future__ import annotations

import json
import os
import tempfile

SCHEMA_VERSION = "1"


def format_float(value) -> str:
    return f"{float(value):.17g}"


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, columns):
    """Write named columns (all equal length) as UTF-8 CSV with UNIX newlines."""
    columns = [list(c) for c in columns]
    n = len(columns[0])
    if any(len(c) != n for c in columns):
        raise ValueError("CSV columns must have equal length")
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(format_float(col[i]) for col in columns))
    _atomic_write(path, "\n".join(lines) + "\n")


def _jsonify(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def write_json(path, payload: dict):
    """Write a JSON report carrying the schema_version field."""
    body = {"schema_version": SCHEMA_VERSION}
    body.update(_jsonify(payload))
    _atomic_write(path, json.dumps(body, indent=2, sort_keys=True) + "\n")
