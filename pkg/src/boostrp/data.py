"""Datasets, CSV ingestion, splitting and seed plumbing."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateOutputError, ParseError, ShapeError, SizingError, ValidationError

SEED_MASK = (1 << 64) - 1


class Task(str, enum.Enum):
    REGRESSION = "regression"
    MULTILABEL = "multilabel"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & SEED_MASK)


def derive_seed(seed: int, *keys: int) -> int:
    """Counter-based child seed: the same (seed, keys) always yields the same 64-bit value."""
    ss = np.random.SeedSequence([int(seed) & SEED_MASK, *(int(k) for k in keys)])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def _frozen(a, ndim):
    a = np.array(a, dtype=np.float64)
    if a.ndim == 1 and ndim == 2:
        a = a.reshape(-1, 1)
    if a.ndim != ndim:
        raise ShapeError(f"expected a {ndim}-d array, got shape {a.shape}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Dense features (n, p) and targets (n, d).

    Multilabel targets are stored in {-1, +1}. Zero-row datasets are allowed
    so that empty split partitions can be represented.
    """

    features: np.ndarray
    targets: np.ndarray
    task: Task = Task.REGRESSION
    feature_names: Optional[tuple] = None
    target_names: Optional[tuple] = None

    def __post_init__(self):
        X = _frozen(self.features, 2)
        Y = _frozen(self.targets, 2)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "targets", Y)
        object.__setattr__(self, "task", Task(self.task))
        if X.shape[0] != Y.shape[0]:
            raise ShapeError(f"features have {X.shape[0]} rows but targets have {Y.shape[0]}")
        if X.shape[1] < 1 or Y.shape[1] < 1:
            raise ShapeError("need at least one feature and one output")
        if not (np.isfinite(X).all() and np.isfinite(Y).all()):
            raise ValidationError("dataset contains NaN or infinite values")
        if self.task is Task.MULTILABEL and not np.isin(Y, (-1.0, 1.0)).all():
            raise ValidationError("multilabel targets must be in {-1, +1}")
        for attr, size in (("feature_names", X.shape[1]), ("target_names", Y.shape[1])):
            names = getattr(self, attr)
            if names is not None:
                names = tuple(str(s) for s in names)
                if len(names) != size:
                    raise ShapeError(f"{attr} has {len(names)} entries, expected {size}")
                object.__setattr__(self, attr, names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def d(self) -> int:
        return self.targets.shape[1]

    def take(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.intp)
        return Dataset(self.features[rows], self.targets[rows], self.task,
                       self.feature_names, self.target_names)


@dataclass(frozen=True)
class Split:
    train: Dataset
    validation: Dataset
    test: Dataset


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, n_outputs: int, task=Task.REGRESSION) -> Dataset:
    """Read a comma-separated file whose last ``n_outputs`` columns are targets.

    A header is assumed when any cell of the first row is non-numeric. For
    multilabel tasks, 0/1 cells are mapped to -1/+1.
    """
    task = Task(task)
    if n_outputs < 1:
        raise ShapeError("n_outputs must be positive")
    header = None
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            if width is None and not all(map(_is_number, cells)):
                header = cells
                width = len(cells)
                continue
            if width is None:
                width = len(cells)
            if len(cells) != width:
                raise ParseError(f"expected {width} columns, found {len(cells)}", row=lineno)
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise ParseError(str(exc), row=lineno) from None
    if width is None:
        raise ParseError("file is empty")
    if width < n_outputs + 1:
        raise ShapeError(f"{width} columns cannot hold {n_outputs} outputs and at least one feature")
    data = np.array(rows, dtype=np.float64).reshape(len(rows), width)
    X, Y = data[:, :-n_outputs], data[:, -n_outputs:]
    if task is Task.MULTILABEL:
        bad = ~np.isin(Y, (0.0, 1.0))
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValidationError(f"label {Y[i, j]!r} at data row {i + 1}, output {j} is not 0 or 1")
        Y = 2.0 * Y - 1.0
    names_x = names_y = None
    if header is not None:
        names_x, names_y = header[:-n_outputs], header[-n_outputs:]
    return Dataset(X, Y, task, names_x, names_y)


def save_csv(ds: Dataset, path) -> None:
    """Write ``ds`` as CSV (features then outputs), inverse of :func:`load_csv`."""
    Y = ds.targets
    if ds.task is Task.MULTILABEL:
        Y = (Y > 0).astype(np.float64)
    data = np.hstack([ds.features, Y])
    with open(path, "w", encoding="utf-8") as fh:
        if ds.feature_names is not None or ds.target_names is not None:
            fx = ds.feature_names or tuple(f"x{i}" for i in range(ds.p))
            fy = ds.target_names or tuple(f"y{j}" for j in range(ds.d))
            fh.write(",".join(fx + fy) + "\n")
        for row in data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def split_dataset(ds: Dataset, fractions: Sequence[float], seed: int) -> Split:
    """Shuffle rows, then cut into train/validation/test blocks.

    Validation and test sizes are floor-rounded; the remainder goes to train.
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or any(f < 0 for f in fractions):
        raise SizingError("fractions must be three nonnegative numbers")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise SizingError(f"fractions sum to {sum(fractions)}, not 1")
    n = ds.n
    n_val = math.floor(fractions[1] * n + 1e-9)
    n_test = math.floor(fractions[2] * n + 1e-9)
    n_train = n - n_val - n_test
    for name, size, frac in zip(("train", "validation", "test"), (n_train, n_val, n_test), fractions):
        if frac > 0 and size == 0:
            raise SizingError(f"{name} partition would be empty with n={n}")
    perm = make_rng(seed).permutation(n)
    return Split(ds.take(perm[:n_train]),
                 ds.take(perm[n_train:n_train + n_val]),
                 ds.take(perm[n_train + n_val:]))


@dataclass(frozen=True)
class TargetScaler:
    mean: np.ndarray
    std: np.ndarray

    def transform(self, Y):
        return (np.asarray(Y, dtype=np.float64) - self.mean) / self.std

    def inverse(self, Y):
        return np.asarray(Y, dtype=np.float64) * self.std + self.mean


def standardize_targets(ds: Dataset):
    """Scale each output to zero mean and unit (population) variance.

    Returns the new dataset and the :class:`TargetScaler` that undoes it.
    """
    if ds.task is not Task.REGRESSION:
        raise ValidationError("only regression targets can be standardized")
    Y = ds.targets
    mean = Y.mean(axis=0)
    centered = Y - mean
    std = np.sqrt((centered ** 2).mean(axis=0))
    for j, s in enumerate(std):
        if not s > 0:
            name = ds.target_names[j] if ds.target_names else str(j)
            raise DegenerateOutputError(f"output {name} is constant", output=j)
    scaler = TargetScaler(mean, std)
    out = Dataset(ds.features, centered / std, ds.task, ds.feature_names, ds.target_names)
    return out, scaler
