"""Dataset ingestion, encoding, CV splitting and the synthetic generator.

CSV files are comma-delimited UTF-8 with '.' decimals.  Numeric columns
are parsed as reals; any other column is one-hot expanded, one 0/1 column
per observed level (levels sorted lexicographically).  The label column
is mapped to class indices in first-appearance order.  Rows with missing
cells are rejected at ingestion.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np


@dataclass
class Dataset:
    X: np.ndarray             # (n, p) encoded feature matrix
    y: np.ndarray             # class indices 0..J-1
    class_names: list[str]
    schema: dict              # column/label metadata for round-trip encoding
    feature_names: list[str]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


def _is_numeric_column(values: list[str]) -> bool:
    for v in values:
        try:
            float(v)
        except ValueError:
            return False
    return True


def _read_rows(path, has_header: bool):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        return None, []
    header = rows.pop(0) if has_header else None
    return header, rows


def _check_missing(rows, header):
    for r, row in enumerate(rows):
        for c, cell in enumerate(row):
            if cell.strip() == "":
                col = header[c] if header else str(c)
                raise ValueError(f"missing value at row {r + 1}, column {col}")


def load_csv(path, label_column, has_header: bool = True) -> Dataset:
    """Load and encode a CSV file; label_column is a name or an index."""
    header, rows = _read_rows(path, has_header)
    if not rows:
        raise ValueError(f"no data rows in {path}")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError(f"inconsistent column counts in {path}")
    _check_missing(rows, header)

    if isinstance(label_column, int):
        label_idx = label_column
    else:
        try:
            label_idx = int(label_column)
        except ValueError:
            if header is None:
                raise ValueError("label column by name requires a header")
            if label_column not in header:
                raise ValueError(f"label column {label_column!r} not found")
            label_idx = header.index(label_column)
    if label_idx < 0:
        label_idx += width
    if not 0 <= label_idx < width:
        raise ValueError("label column index out of range")

    # classes in first-appearance order
    class_names: list[str] = []
    for row in rows:
        v = row[label_idx]
        if v not in class_names:
            class_names.append(v)
    if len(class_names) < 2:
        raise ValueError("need at least 2 classes")
    y = np.array([class_names.index(row[label_idx]) for row in rows])

    columns = []
    for c in range(width):
        if c == label_idx:
            continue
        name = header[c] if header else f"col{c}"
        values = [row[c] for row in rows]
        if _is_numeric_column(values):
            columns.append({"name": name, "kind": "numeric", "position": c})
        else:
            levels = sorted(set(values))
            columns.append({"name": name, "kind": "categorical",
                            "position": c, "levels": levels})

    schema = {
        "label": {"name": header[label_idx] if header else f"col{label_idx}",
                  "position": label_idx, "classes": class_names},
        "columns": columns,
        "has_header": header is not None,
    }
    X, feature_names = encode_rows(rows, header, schema, label_present=True)
    return Dataset(X=X, y=y, class_names=class_names, schema=schema,
                   feature_names=feature_names)


def _feature_names(schema) -> list[str]:
    names = []
    for col in schema["columns"]:
        if col["kind"] == "numeric":
            names.append(col["name"])
        else:
            names.extend(f"{col['name']}={lv}" for lv in col["levels"])
    return names


def encode_rows(rows, header, schema, label_present: bool | None = None):
    """Encode raw CSV rows against a recorded schema.

    Columns are matched by name when a header is given, otherwise by the
    recorded positions (adjusted if the label column is absent).  Unseen
    categorical levels encode as an all-zero one-hot block with a warning.
    Returns (X, feature_names).
    """
    names = _feature_names(schema)
    if not rows:
        return np.zeros((0, len(names))), names

    label_pos = schema["label"]["position"]
    if label_present is None:
        n_train_cols = len(schema["columns"]) + 1
        label_present = len(rows[0]) >= n_train_cols
    if header is not None:
        index = {name: i for i, name in enumerate(header)}

        def locate(col):
            if col["name"] not in index:
                raise ValueError(f"column {col['name']!r} missing from input")
            return index[col["name"]]
    else:
        def locate(col):
            pos = col["position"]
            return pos if label_present or pos < label_pos else pos - 1

    _check_missing(rows, header)
    blocks = []
    for col in schema["columns"]:
        idx = locate(col)
        raw = [row[idx] for row in rows]
        if col["kind"] == "numeric":
            try:
                blocks.append(np.array([float(v) for v in raw])[:, None])
            except ValueError:
                raise ValueError(f"non-numeric value in column {col['name']!r}")
        else:
            levels = col["levels"]
            block = np.zeros((len(rows), len(levels)))
            lut = {lv: i for i, lv in enumerate(levels)}
            unseen = set()
            for r, v in enumerate(raw):
                if v in lut:
                    block[r, lut[v]] = 1.0
                else:
                    unseen.add(v)
            if unseen:
                warnings.warn(
                    f"column {col['name']!r}: unseen levels {sorted(unseen)} "
                    "encoded as all-zero")
            blocks.append(block)
    return np.hstack(blocks), names


def stratified_kfold(y, k: int, seed: int):
    """k (train_indices, test_indices) pairs with per-class round-robin
    assignment after a seeded shuffle.  Folds partition the rows and class
    proportions stay within one instance of the global ones."""
    y = np.asarray(y)
    n = y.size
    if not 2 <= k <= n:
        raise ValueError("k must be between 2 and n")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=int)
    next_fold = 0
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(idx.size)]
        for i, row in enumerate(idx):
            fold_of[row] = (next_fold + i) % k
        next_fold = (next_fold + idx.size) % k
    splits = []
    for f in range(k):
        test = np.flatnonzero(fold_of == f)
        train = np.flatnonzero(fold_of != f)
        splits.append((train, test))
    return splits


@dataclass
class SimConfig:
    """Synthetic binary problem: X uniform on [0,1]^d, P(Y=1|x) jumps from
    q to 1-q when the first E coordinates sum past E/2 (q = Bayes error)."""

    d: int = 10
    E: int = 5
    q: float = 0.1
    n_train: int = 2000
    n_test: int = 10000
    seed: int = 0


def _sim_dataset(rng, n, cfg: SimConfig) -> Dataset:
    X = rng.random((n, cfg.d))
    p1 = cfg.q + (1.0 - 2.0 * cfg.q) * (X[:, :cfg.E].sum(axis=1) > cfg.E / 2.0)
    y = (rng.random(n) < p1).astype(int)
    columns = [{"name": f"x{j + 1}", "kind": "numeric", "position": j}
               for j in range(cfg.d)]
    schema = {"label": {"name": "y", "position": cfg.d,
                        "classes": ["-1", "1"]},
              "columns": columns, "has_header": True}
    return Dataset(X=X, y=y, class_names=["-1", "1"], schema=schema,
                   feature_names=[c["name"] for c in columns])


def simulate(cfg: SimConfig):
    """Generate (train, test) datasets, reproducible from cfg.seed."""
    if not 1 <= cfg.E <= cfg.d:
        raise ValueError("effective dimension must satisfy 1 <= E <= d")
    if not 0.0 <= cfg.q < 0.5:
        raise ValueError("Bayes error q must be in [0, 0.5)")
    rng = np.random.default_rng(cfg.seed)
    return _sim_dataset(rng, cfg.n_train, cfg), _sim_dataset(rng, cfg.n_test, cfg)


def accuracy(predictions, labels) -> float:
    """Classification accuracy as a percentage."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.size == 0:
        raise ValueError("empty predictions")
    if predictions.shape != labels.shape:
        raise ValueError("predictions and labels differ in length")
    return 100.0 * float(np.mean(predictions == labels))


def summarize_cv(fold_accuracies):
    """(mean, sample sd) of per-fold accuracy percentages (divisor k-1)."""
    a = np.asarray(fold_accuracies, dtype=float)
    if a.size == 0:
        raise ValueError("no fold accuracies")
    mean = float(np.mean(a))
    sd = float(np.std(a, ddof=1)) if a.size > 1 else 0.0
    return mean, sd
