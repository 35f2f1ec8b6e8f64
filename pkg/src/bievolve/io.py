"""File formats: JSON matrices/vectors and locale-free CSV tables.

Matrices are ``{"dim": d, "entries": [[re, im], ...]}`` in row-major order and
vectors are ``{"dim": d, "amplitudes": [[re, im], ...]}``. Numbers in CSV
output carry 17 significant digits with ``.`` as decimal separator and LF line
endings, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import numpy as np

from .exceptions import InvalidInputError
from .linops import as_matrix, as_state


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _pairs(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def _complex_entries(pairs, count: int, what: str) -> np.ndarray:
    if not isinstance(pairs, list) or len(pairs) != count:
        raise InvalidInputError(f"{what}: expected {count} [re, im] pairs")
    try:
        return np.array([complex(float(re), float(im)) for re, im in pairs])
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{what}: malformed [re, im] pair") from exc


def matrix_to_json(a) -> dict:
    a = as_matrix(a)
    return {"dim": a.shape[0], "entries": _pairs(a)}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        pairs = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError("matrix JSON needs integer 'dim' and 'entries'") from exc
    if dim < 1:
        raise InvalidInputError("matrix dim must be positive")
    return as_matrix(_complex_entries(pairs, dim * dim, "matrix").reshape(dim, dim))


def state_to_json(v) -> dict:
    v = as_state(v)
    return {"dim": v.size, "amplitudes": _pairs(v)}


def state_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        pairs = obj["amplitudes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError("vector JSON needs integer 'dim' and 'amplitudes'") from exc
    if dim < 1:
        raise InvalidInputError("vector dim must be positive")
    return as_state(_complex_entries(pairs, dim, "vector"))


def _load(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from exc


def read_matrix(path: str) -> np.ndarray:
    return matrix_from_json(_load(path))


def read_state(path: str) -> np.ndarray:
    return state_from_json(_load(path))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def write_text(path: str, text: str) -> None:
    """Write ``text`` with LF endings; ``-`` means stdout."""
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, str)) else fmt(v) for v in row])
    return buf.getvalue()


def log_or_neg_inf(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf
