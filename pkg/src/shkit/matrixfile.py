"""MatrixFile JSON codec: {"rows": n, "cols": m, "data": [[[re, im], ...], ...]}.

Floats are written with ``repr`` precision, so a dump/load round trip is bit-exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NonFinite, ShkitError


class MatrixFileError(ShkitError):
    pass


def to_dict(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite("matrix contains NaN or Inf")
    data = [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": data}


def from_dict(doc) -> np.ndarray:
    if not isinstance(doc, dict) or not {"rows", "cols", "data"} <= doc.keys():
        raise MatrixFileError("MatrixFile must be an object with rows, cols and data")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise MatrixFileError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows:
        raise MatrixFileError(f"data must hold {rows} rows")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise MatrixFileError(f"row {i} must hold {cols} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)):
                raise MatrixFileError(f"entry ({i}, {j}) must be a [re, im] pair of numbers")
            out[i, j] = complex(float(entry[0]), float(entry[1]))
    if not np.all(np.isfinite(out)):
        raise NonFinite("matrix contains NaN or Inf")
    return out


def dumps(M) -> str:
    return json.dumps(to_dict(M), allow_nan=False)


def loads(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"invalid JSON: {exc}") from None
    return from_dict(doc)


def read(path) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MatrixFileError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def write(path, M) -> None:
    Path(path).write_text(dumps(M) + "\n", encoding="utf-8")
