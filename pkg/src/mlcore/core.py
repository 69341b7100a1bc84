"""Shared data model, label encoding, resampling and error evaluation.

All estimators in the library consume validated float64 sample matrices and
integer (classification) or real (regression) targets. Validation happens
once, at dataset construction; estimators may assume finite, well-shaped
input.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidData,
    InvalidFoldCount,
    InvalidLabels,
    InvalidSplit,
    ShapeMismatch,
)
from .rng import make_rng


def _freeze(a):
    a.flags.writeable = False
    return a


def as_sample_matrix(x):
    """Validate and return an n x p float64 matrix.

    1-d input is treated as a single-feature column. Rejects empty arrays
    and any non-finite entry.
    """
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise InvalidData(f"expected 2-d sample matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidData(f"empty sample matrix {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidData("sample matrix contains NaN or Inf")
    return _freeze(a.copy())


def as_vector(y, dtype=np.float64):
    a = np.asarray(y, dtype=dtype)
    if a.ndim != 1:
        raise InvalidData(f"expected 1-d vector, got ndim={a.ndim}")
    if a.size < 1:
        raise InvalidData("empty vector")
    if not np.all(np.isfinite(a)):
        raise InvalidData("vector contains NaN or Inf")
    return _freeze(a.copy())


@dataclass(frozen=True)
class LabeledDataset:
    """Immutable (X, y) pair.

    ``classes`` is the sorted distinct label set for classification tasks and
    None for regression targets.
    """

    x: np.ndarray
    y: np.ndarray
    classes: np.ndarray | None = field(default=None)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def p(self):
        return self.x.shape[1]


def classification_dataset(x, y):
    """Build a dataset with integer labels; requires >= 2 distinct classes."""
    x = as_sample_matrix(x)
    y = as_vector(y, dtype=np.int64)
    if y.shape[0] != x.shape[0]:
        raise ShapeMismatch(f"{x.shape[0]} rows but {y.shape[0]} labels")
    classes = np.unique(y)
    if classes.size < 2:
        raise InvalidLabels("classification requires at least 2 distinct labels")
    return LabeledDataset(x, y, _freeze(classes))


def regression_dataset(x, y):
    x = as_sample_matrix(x)
    y = as_vector(y)
    if y.shape[0] != x.shape[0]:
        raise ShapeMismatch(f"{x.shape[0]} rows but {y.shape[0]} targets")
    return LabeledDataset(x, y, None)


def encode_labels(y):
    """Map raw integer labels to the canonical encoding.

    Two classes map to {-1, +1} with the smaller label on the -1 side; c > 2
    classes map to {0 .. c-1} in ascending label order. Returns the encoded
    vector and the sorted class table.
    """
    y = as_vector(y, dtype=np.int64)
    classes = np.unique(y)
    if classes.size < 2:
        raise InvalidLabels("need at least 2 distinct labels to encode")
    if classes.size == 2:
        enc = np.where(y == classes[0], -1, 1).astype(np.int64)
    else:
        enc = np.searchsorted(classes, y).astype(np.int64)
    return _freeze(enc), _freeze(classes)


def decode_labels(enc, classes):
    """Invert encode_labels: canonical encoding back to the original alphabet."""
    enc = np.asarray(enc, dtype=np.int64)
    classes = np.asarray(classes, dtype=np.int64)
    if classes.size == 2:
        return np.where(enc <= 0, classes[0], classes[1])
    return classes[enc]


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of n samples to k folds; fold sizes differ by at most 1."""

    n: int
    k: int
    assignments: np.ndarray
    seed: int

    def test_indices(self, fold):
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold):
        return np.flatnonzero(self.assignments != fold)

    def splits(self):
        for fold in range(self.k):
            yield self.train_indices(fold), self.test_indices(fold)


def kfold(n, k, seed, stratify_on=None):
    """Deterministic k-fold plan, optionally stratified on a label vector.

    Samples are shuffled once with the seeded generator and dealt
    round-robin; with stratification the deal runs class by class with a
    carried fold pointer, so total fold sizes still differ by at most one
    while per-fold class counts stay within one of n_c / k.
    """
    n, k = int(n), int(k)
    if k < 2 or k > n:
        raise InvalidFoldCount(f"need 2 <= k <= n, got k={k}, n={n}")
    gen = make_rng(seed, "kfold")
    assignments = np.empty(n, dtype=np.int64)
    if stratify_on is None:
        order = gen.permutation(n)
        assignments[order] = np.arange(n) % k
    else:
        labels = as_vector(stratify_on, dtype=np.int64)
        if labels.shape[0] != n:
            raise ShapeMismatch("stratify_on length differs from n")
        pointer = 0
        for cls in np.unique(labels):
            members = np.flatnonzero(labels == cls)
            members = members[gen.permutation(members.size)]
            for idx in members:
                assignments[idx] = pointer % k
                pointer += 1
    return FoldPlan(n, k, _freeze(assignments), int(seed))


def monte_carlo_split(n, train_fraction, replicates, seed):
    """Seeded sequence of (train, test) index pairs with floor(n * fraction) train rows."""
    n = int(n)
    n_train = int(np.floor(n * float(train_fraction)))
    if n_train < 1 or n - n_train < 1:
        raise InvalidSplit(
            f"fraction {train_fraction} leaves an empty side for n={n}"
        )
    gen = make_rng(seed, "montecarlo")
    out = []
    for _ in range(int(replicates)):
        order = gen.permutation(n)
        out.append((_freeze(np.sort(order[:n_train])), _freeze(np.sort(order[n_train:]))))
    return out


def error_rate(y_true, y_pred):
    """Fraction of positions where the two label vectors disagree."""
    a = np.asarray(y_true)
    b = np.asarray(y_pred)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeMismatch(f"label vectors {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ShapeMismatch("empty label vectors")
    return float(np.mean(a != b))


@dataclass(frozen=True)
class ConfusionMatrix:
    classes: np.ndarray
    counts: np.ndarray

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def accuracy(self):
        return float(np.trace(self.counts)) / self.total


def confusion(y_true, y_pred, classes):
    """c x c count matrix indexed (true, predicted); labels must be in ``classes``."""
    classes = np.unique(np.asarray(classes, dtype=np.int64))
    a = np.asarray(y_true, dtype=np.int64)
    b = np.asarray(y_pred, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeMismatch(f"label vectors {a.shape} vs {b.shape}")
    if not (np.isin(a, classes).all() and np.isin(b, classes).all()):
        raise InvalidLabels(f"labels outside class table {classes.tolist()}")
    ia = np.searchsorted(classes, a)
    ib = np.searchsorted(classes, b)
    c = classes.size
    counts = np.zeros((c, c), dtype=np.int64)
    np.add.at(counts, (ia, ib), 1)
    return ConfusionMatrix(_freeze(classes), _freeze(counts))
