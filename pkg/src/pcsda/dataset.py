"""Data ingestion, one-vs-rest problem formation and stratified splitting."""
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import ConfigError


def _frozen(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def _check_samples(X):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"sample matrix must be 2-D with N >= 1 and D >= 1, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("sample matrix contains non-finite values")
    return X


@dataclass(frozen=True)
class MulticlassDataset:
    """Samples with their raw (string) class labels, as read from disk."""

    X: np.ndarray
    labels: np.ndarray
    feature_names: tuple = ()

    def __post_init__(self):
        X = _check_samples(self.X)
        labels = np.asarray(self.labels).astype(str)
        if labels.shape != (X.shape[0],):
            raise ValueError(f"expected {X.shape[0]} labels, got shape {labels.shape}")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "labels", _frozen(labels))

    @property
    def classes(self):
        """Distinct labels in order of first appearance."""
        _, first = np.unique(self.labels, return_index=True)
        return [str(self.labels[i]) for i in sorted(first)]


@dataclass(frozen=True)
class LabeledDataset:
    """A binary class-specific problem: ``y[i]`` is True for the positive class.

    ``index`` keeps the row numbers of the originating dataset so that splits
    can be traced back to the source file.
    """

    X: np.ndarray
    y: np.ndarray
    index: np.ndarray = field(default=None)

    def __post_init__(self):
        X = _check_samples(self.X)
        y = np.asarray(self.y, dtype=bool)
        if y.shape != (X.shape[0],):
            raise ValueError(f"expected {X.shape[0]} labels, got shape {y.shape}")
        if y.sum() < 2 or (~y).sum() < 1:
            raise ValueError(
                f"need at least 2 positive and 1 negative samples, got {int(y.sum())} / {int((~y).sum())}"
            )
        index = np.arange(X.shape[0]) if self.index is None else np.asarray(self.index, dtype=int)
        if index.shape != y.shape:
            raise ValueError("index must have one entry per row")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "index", _frozen(index))

    @property
    def n_pos(self):
        return int(self.y.sum())

    @property
    def n_neg(self):
        return int((~self.y).sum())

    def subset(self, rows):
        rows = np.asarray(rows, dtype=int)
        return LabeledDataset(self.X[rows], self.y[rows], self.index[rows])


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _resolve_label_column(label_column, header, n_cols):
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None or label_column not in header:
            raise ConfigError(f"label column {label_column!r} not found in header")
        return header.index(label_column)
    col = int(label_column)
    if col < 0:
        col += n_cols
    if not 0 <= col < n_cols:
        raise ConfigError(f"label column index {label_column} out of range for {n_cols} columns")
    return col


def _read_table(path, label_column):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"data file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [(i + 1, r) for i, r in enumerate(csv.reader(fh)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ConfigError(f"{path}: empty file")

    n_cols = len(rows[0][1])
    first = [c.strip() for c in rows[0][1]]
    probe = None
    if label_column is not None:
        try:
            probe = _resolve_label_column(label_column, None, n_cols)
        except ConfigError:
            probe = -1  # a column name: the first row must be a header
    header = None
    if probe == -1 or not all(_is_number(c) for j, c in enumerate(first) if j != probe):
        header = first
        rows = rows[1:]
        if not rows:
            raise ConfigError(f"{path}: no data rows after header")
    col = None if label_column is None else _resolve_label_column(label_column, header, n_cols)

    n_feat = n_cols if col is None else n_cols - 1
    if n_feat < 1:
        raise ConfigError(f"{path}: no feature columns")
    X = np.empty((len(rows), n_feat))
    labels = []
    for r, (lineno, row) in enumerate(rows):
        if len(row) != n_cols:
            raise ConfigError(f"{path}: row {lineno} has {len(row)} columns, expected {n_cols}")
        src = [j for j in range(n_cols) if j != col]
        for j, sj in enumerate(src):
            cell = row[sj]
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                raise ConfigError(f"{path}: row {lineno}, column {sj}: invalid value {cell.strip()!r}")
            X[r, j] = v
        if col is not None:
            labels.append(row[col].strip())
    names = tuple(h for j, h in enumerate(header) if j != col) if header else ()
    return X, labels, names


def load_csv(path, label_column=-1):
    """Read a comma-separated numeric table with one label column.

    A header row is detected when any cell of the first row, other than
    the label, fails to parse as a number. ``label_column`` is a header name
    or a 0-based column index (negative indices count from the end).

    Raises
    ------
    ConfigError
        On an empty file, ragged rows, or a non-finite / unparsable cell. The
        message names the 1-based file row and 0-based column.
    """
    X, labels, names = _read_table(path, label_column)
    return MulticlassDataset(X, np.array(labels), names)


def load_matrix(path, label_column=None):
    """Feature matrix only; ``label_column``, if given, is dropped."""
    return _read_table(path, label_column)[0]


def make_class_specific(data, target_class):
    """One-vs-rest relabeling: rows of ``target_class`` become positive."""
    target = str(target_class)
    y = data.labels == target
    if not y.any():
        raise ValueError(f"unknown target class {target!r}")
    if y.sum() < 2:
        raise ValueError(f"target class {target!r} has fewer than 2 samples")
    if y.all():
        raise ValueError("no negative samples: only the target class is present")
    return LabeledDataset(data.X, y)


def _train_count(fraction, n):
    return int(math.floor(fraction * n + 0.5))


def split_indices(y, spec):
    """Stratified train/test row indices (sorted) for a boolean label vector."""
    rng = np.random.default_rng(spec.seed)
    train, test = [], []
    for stratum in (np.flatnonzero(y), np.flatnonzero(~y)):
        perm = rng.permutation(stratum)
        n_train = _train_count(spec.train_fraction, len(stratum))
        train.append(perm[:n_train])
        test.append(perm[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def split(ds, spec):
    """Seeded stratified split into ``(train, test)``.

    Within each stratum ``floor(fraction * n + 0.5)`` rows go to training.
    """
    tr, te = split_indices(ds.y, spec)
    try:
        return ds.subset(tr), ds.subset(te)
    except ValueError as exc:
        raise ValueError(f"degenerate stratum for split {spec}: {exc}") from None
