"""File formats: dataset CSV, score-group JSON, results tables.

Score-group JSON layout::

    {
      "n": 2, "p": 3, "m": 3,
      "class_names": ["c1", "c2", "c3"],
      "labels": [[0, 1, 0], [1, 0, 1]],
      "classifiers": [{"id": "cf1", "scores": [[0.5, 0.6, 0.3], [0.7, 0.3, 0.9]]}, ...],
      "weights": [0.2, 0.3, 0.5]            # optional
    }

Purely geometric configurations replace ``"labels"`` with a free
``"target"`` point; scores are then not range-checked.

Floats are written with Python's shortest round-trip representation, so a
save/load cycle reproduces every value bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
import os
from typing import Iterable, Sequence

import numpy as np

from .core import EnsembleGroup, IdealLabels, ScoreMatrix, as_point
from .errors import FormatError, ShapeError
from .evaluation import ExperimentRow
from .learners import Dataset
from .weights import WeightVector

__all__ = [
    "load_dataset_csv",
    "save_dataset_csv",
    "load_scores_json",
    "save_scores_json",
    "load_weights_json",
    "write_results",
    "read_results_csv",
    "read_column",
    "format_number",
]

LABEL_COLUMN = "class"


def format_number(x: float, digits: int = 6) -> str:
    return f"{x:.{digits}g}"


def load_dataset_csv(path: str | os.PathLike) -> Dataset:
    """Read a header-first CSV whose ``class`` column holds the labels.

    Class indices follow the lexicographic order of the label strings.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if LABEL_COLUMN not in header:
        raise FormatError(f"{path}: no {LABEL_COLUMN!r} column in header {header}")
    label_col = header.index(LABEL_COLUMN)
    feat_cols = [i for i in range(len(header)) if i != label_col]
    if not feat_cols:
        raise FormatError(f"{path}: no feature columns")
    body = [r for r in rows[1:] if r and any(c.strip() for c in r)]
    if not body:
        raise FormatError(f"{path}: no data rows")
    feats = np.empty((len(body), len(feat_cols)))
    raw_labels = []
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise FormatError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        for j, c in enumerate(feat_cols):
            cell = row[c].strip()
            if cell == "":
                raise FormatError(f"{path}: missing value at row {r}, column {header[c]!r}")
            try:
                feats[r - 2, j] = float(cell)
            except ValueError:
                raise FormatError(
                    f"{path}: non-numeric value {cell!r} at row {r}, column {header[c]!r}"
                ) from None
            if not math.isfinite(feats[r - 2, j]):
                raise FormatError(f"{path}: non-finite value at row {r}, column {header[c]!r}")
        label = row[label_col].strip()
        if label == "":
            raise FormatError(f"{path}: missing value at row {r}, column {LABEL_COLUMN!r}")
        raw_labels.append(label)
    names = sorted(set(raw_labels))
    index = {c: i for i, c in enumerate(names)}
    return Dataset(feats, [index[c] for c in raw_labels], tuple(names))


def save_dataset_csv(ds: Dataset, path: str | os.PathLike, feature_names: Sequence[str] | None = None) -> None:
    names = list(feature_names) if feature_names else [f"x{j + 1}" for j in range(ds.d)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + [LABEL_COLUMN])
        for x, y in zip(ds.features, ds.labels):
            w.writerow([repr(float(v)) for v in x] + [ds.class_names[y]])


def save_scores_json(
    group: EnsembleGroup,
    ideal,
    path: str | os.PathLike,
    class_names: Sequence[str] | None = None,
    weights=None,
) -> None:
    """Write a score group.  A plain-array ``ideal`` is stored as ``"target"``."""
    o = as_point(ideal)
    if group.shape != o.shape:
        raise ShapeError(f"group shape {group.shape} != ideal shape {o.shape}")
    n, p = group.shape
    payload = {
        "n": n,
        "p": p,
        "m": group.m,
        "class_names": list(class_names) if class_names else [f"c{j + 1}" for j in range(p)],
    }
    if isinstance(ideal, IdealLabels):
        payload["labels"] = ideal.labels.astype(int).tolist()
    else:
        payload["target"] = o.tolist()
    payload["classifiers"] = [{"id": s.classifier_id, "scores": s.scores.tolist()} for s in group]
    if weights is not None:
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        if w.size != group.m:
            raise ShapeError(f"got {w.size} weights for {group.m} members")
        payload["weights"] = w.tolist()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise FormatError(f"{path}: top level must be an object")
    return data


def _matrix(value, n: int, p: int, what: str, path) -> np.ndarray:
    try:
        arr = np.array(value, dtype=np.float64)
    except (TypeError, ValueError):
        raise FormatError(f"{path}: {what} is not a numeric matrix") from None
    if arr.shape != (n, p):
        raise ShapeError(f"{path}: {what} has shape {arr.shape}, declared ({n}, {p})")
    return arr


def load_scores_json(path: str | os.PathLike):
    """Load and fully re-validate a score-group file.

    Returns the group and either an :class:`IdealLabels` or, for files
    with a ``"target"`` entry, a plain ``(n, p)`` array.
    """
    data = _read_json(path)
    for key in ("n", "p", "m", "classifiers"):
        if key not in data:
            raise FormatError(f"{path}: missing key {key!r}")
    if ("labels" in data) == ("target" in data):
        raise FormatError(f"{path}: need exactly one of 'labels' or 'target'")
    n, p, m = data["n"], data["p"], data["m"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, p, m)):
        raise FormatError(f"{path}: n, p, m must be integers")
    geometric = "target" in data
    if geometric:
        ideal = _matrix(data["target"], n, p, "target", path)
        if not np.all(np.isfinite(ideal)):
            raise FormatError(f"{path}: target contains NaN or Inf")
    else:
        ideal = IdealLabels(_matrix(data["labels"], n, p, "labels", path))
    classifiers = data["classifiers"]
    if not isinstance(classifiers, list) or len(classifiers) != m:
        got = len(classifiers) if isinstance(classifiers, list) else "non-list"
        raise ShapeError(f"{path}: declared m={m} but found {got} classifiers")
    members = []
    for k, c in enumerate(classifiers):
        if not isinstance(c, dict) or "scores" not in c:
            raise FormatError(f"{path}: classifier {k} lacks 'scores'")
        cid = str(c.get("id", f"S{k + 1}"))
        scores = _matrix(c["scores"], n, p, f"scores of {cid!r}", path)
        members.append(ScoreMatrix(cid, scores, check_range=not geometric))
    return EnsembleGroup(tuple(members)), ideal


def load_weights_json(path: str | os.PathLike) -> WeightVector:
    data = _read_json(path)
    if "weights" not in data:
        raise FormatError(f"{path}: no 'weights' entry")
    w = WeightVector(data["weights"])
    if "m" in data and len(w) != data["m"]:
        raise ShapeError(f"{path}: {len(w)} weights for declared m={data['m']}")
    return w


def write_results(rows: Iterable[ExperimentRow], path: str | os.PathLike, format: str = "csv", digits: int = 6) -> None:
    """Write experiment rows as CSV or as a JSON array of row objects."""
    rows = list(rows)
    cols = ExperimentRow.table_fields()
    if format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for r in rows:
                d = r.as_table_dict()
                w.writerow([d["m"]] + [format_number(d[c], digits) for c in cols[1:]])
    elif format == "json":
        out = []
        for r in rows:
            d = r.as_table_dict()
            out.append({c: d[c] if c == "m" else float(format_number(d[c], digits)) for c in cols})
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def read_results_csv(path: str | os.PathLike) -> list[ExperimentRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ExperimentRow.table_fields():
            raise FormatError(f"{path}: unexpected columns {reader.fieldnames}")
        return [
            ExperimentRow(m=int(r["m"]), **{k: float(v) for k, v in r.items() if k != "m"})
            for r in reader
        ]


def read_column(path: str | os.PathLike, column: str | None = None) -> np.ndarray:
    """Numbers from a one-column file, or from a named column of a CSV with
    a header row."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise FormatError(f"{path}: empty file")

    def numeric(row):
        try:
            [float(c) for c in row]
            return True
        except ValueError:
            return False

    has_header = not numeric(rows[0])
    body = rows[1:] if has_header else rows
    if column is not None:
        if not has_header:
            raise FormatError(f"{path}: no header row to find column {column!r}")
        header = [h.strip() for h in rows[0]]
        if column not in header:
            raise FormatError(f"{path}: no column {column!r} in {header}")
        j = header.index(column)
    else:
        if len(rows[0]) != 1:
            raise FormatError(f"{path}: {len(rows[0])} columns; name one to use")
        j = 0
    try:
        return np.array([float(r[j]) for r in body])
    except (ValueError, IndexError):
        raise FormatError(f"{path}: non-numeric or missing entry in column {j}") from None
