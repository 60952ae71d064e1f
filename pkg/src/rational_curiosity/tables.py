"""Readers for the ratings and reveals CSV files written by the experiment."""

from __future__ import annotations

import csv
import math
from typing import Dict

import numpy as np

from .exceptions import CuriosityError
from .experiment import RATINGS_HEADER, REVEALS_HEADER, Condition


class MalformedTableError(CuriosityError, ValueError):
    """A CSV file does not conform to its declared header or value ranges."""


def _float(text, name, path, line, lo=None, hi=None):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise MalformedTableError(f"{path} row {line}: {name} is not a number: {text!r}") from None
    if not math.isfinite(v) or (lo is not None and v < lo) or (hi is not None and v > hi):
        raise MalformedTableError(f"{path} row {line}: {name} out of range: {text!r}")
    return v


def _int(text, name, path, line):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise MalformedTableError(f"{path} row {line}: {name} is not an integer: {text!r}") from None


def _read(path, header, parse_row, conf_max) -> Dict[str, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None:
            raise MalformedTableError(f"{path}: file is empty")
        if tuple(first) != header:
            raise MalformedTableError(
                f"{path} row 1: expected header {','.join(header)!r}, got {','.join(first)!r}")
        rows = []
        for line, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise MalformedTableError(
                    f"{path} row {line}: expected {len(header)} fields, got {len(row)}")
            rows.append(parse_row(dict(zip(header, row)), path, line, conf_max))
    if not rows:
        raise MalformedTableError(f"{path}: no data rows")
    return {k: np.array([r[k] for r in rows]) for k in rows[0]}


def _condition(text, path, line):
    try:
        return Condition(text).value
    except ValueError:
        raise MalformedTableError(f"{path} row {line}: unknown condition {text!r}") from None


def _ratings_row(r, path, line, conf_max):
    return {
        "participant_id": _int(r["participant_id"], "participant_id", path, line),
        "condition": _condition(r["condition"], path, line),
        "question_id": _int(r["question_id"], "question_id", path, line),
        "true_confidence": _float(r["true_confidence"], "true_confidence", path, line, 0, conf_max),
        "reported_confidence": _float(r["reported_confidence"], "reported_confidence", path, line,
                                      0, conf_max),
        "curiosity_rating": _float(r["curiosity_rating"], "curiosity_rating", path, line),
    }


def _reveals_row(r, path, line, conf_max):
    revealed = r["revealed"].strip().lower()
    if revealed not in ("0", "1", "true", "false"):
        raise MalformedTableError(f"{path} row {line}: revealed must be 0 or 1, got {r['revealed']!r}")
    return {
        "participant_id": _int(r["participant_id"], "participant_id", path, line),
        "condition": _condition(r["condition"], path, line),
        "question_id": _int(r["question_id"], "question_id", path, line),
        "reported_confidence": _float(r["reported_confidence"], "reported_confidence", path, line,
                                      0, conf_max),
        "revealed": revealed in ("1", "true"),
    }


def read_ratings(path, percent: bool = False) -> Dict[str, np.ndarray]:
    """Columns of a ratings file; confidences are left on their native scale."""
    return _read(path, RATINGS_HEADER, _ratings_row, 100.0 if percent else 1.0)


def read_reveals(path, percent: bool = False) -> Dict[str, np.ndarray]:
    return _read(path, REVEALS_HEADER, _reveals_row, 100.0 if percent else 1.0)
