"""Instance-based and tree classifiers: k-NN, Parzen discriminant, CART tree."""

from dataclasses import dataclass

import numpy as np

from .core import as_sample_matrix, encode_labels
from .errors import InvalidLabels, InvalidParameter, ShapeMismatch
from .kernels import validate_square_gram
from .linear import _frozen


@dataclass(frozen=True)
class KnnModel:
    x: np.ndarray
    y: np.ndarray
    classes: np.ndarray
    k: int
    metric: str = "euclidean"


def knn_fit(d, k):
    if not 1 <= k <= d.n:
        raise InvalidParameter(f"k must be in [1, {d.n}], got {k}")
    return KnnModel(d.x, d.y, d.classes, int(k))


def knn_predict(m, x):
    """Majority vote among the k nearest training points (squared Euclidean).

    Distance ties prefer the lower training index; vote ties the lowest class.
    """
    x = as_sample_matrix(x)
    if x.shape[1] != m.x.shape[1]:
        raise ShapeMismatch(f"{x.shape[1]} features, model has {m.x.shape[1]}")
    d2 = (
        np.sum(x * x, axis=1)[:, None]
        - 2.0 * x @ m.x.T
        + np.sum(m.x * m.x, axis=1)[None, :]
    )
    out = np.empty(x.shape[0], dtype=m.y.dtype)
    class_idx = np.searchsorted(m.classes, m.y)
    order_idx = np.arange(m.x.shape[0])
    for row in range(x.shape[0]):
        order = np.lexsort((order_idx, d2[row]))
        votes = np.bincount(class_idx[order[: m.k]], minlength=m.classes.size)
        out[row] = m.classes[np.argmax(votes)]
    return out


@dataclass(frozen=True)
class ParzenModel:
    """Kernel mean-difference discriminant.

    g(z) = mean of k(z, positive training) - mean of k(z, negative training);
    points with g(z) >= threshold (default 0) classify as the larger label.
    ``x_train``/``kernel`` are retained only when fit from raw data, to let
    the model compute its own kernel rows at prediction time.
    """

    y_pm: np.ndarray
    classes: np.ndarray
    threshold: float = 0.0
    x_train: np.ndarray | None = None
    kernel: object | None = None


def parzen_fit(k, labels):
    k = validate_square_gram(k)
    y_pm, classes = encode_labels(labels)
    if classes.size != 2:
        raise InvalidLabels("parzen_fit is binary only")
    if y_pm.shape[0] != k.shape[0]:
        raise ShapeMismatch("label count differs from Gram size")
    return ParzenModel(_frozen(y_pm.copy()), classes)


def parzen_fit_data(d, kernel):
    """Fit from raw data; the Gram is built with ``kernel`` internally."""
    from .kernels import gram

    k = gram(kernel, d.x)
    base = parzen_fit(k, d.y)
    return ParzenModel(base.y_pm, base.classes, base.threshold, d.x, kernel)


def parzen_decision(m, k_rows):
    k_rows = np.asarray(k_rows, dtype=np.float64)
    if k_rows.ndim == 1:
        k_rows = k_rows.reshape(1, -1)
    if k_rows.shape[1] != m.y_pm.shape[0]:
        raise ShapeMismatch("kernel row length differs from training size")
    pos = m.y_pm > 0
    return k_rows[:, pos].mean(axis=1) - k_rows[:, ~pos].mean(axis=1)


def parzen_predict(m, k_rows):
    g = parzen_decision(m, k_rows)
    return np.where(g >= m.threshold, m.classes[1], m.classes[0])


def parzen_predict_data(m, x):
    """Predict raw queries; requires a model fit via ``parzen_fit_data``."""
    from .kernels import gram

    if m.x_train is None:
        raise InvalidParameter("model holds no training data; pass kernel rows instead")
    return parzen_predict(m, gram(m.kernel, as_sample_matrix(x), m.x_train))


@dataclass(frozen=True)
class TreeNode:
    """CART node: a split when ``feature`` >= 0, otherwise a leaf.

    Routing sends x[feature] <= threshold to the left child. ``counts`` holds
    the per-class training counts that reached the node.
    """

    feature: int
    threshold: float
    left: "TreeNode | None"
    right: "TreeNode | None"
    label: int
    counts: np.ndarray

    @property
    def is_leaf(self):
        return self.feature < 0


def _gini(counts):
    n = counts.sum()
    if n == 0:
        return 0.0
    f = counts / n
    return 1.0 - float(np.sum(f * f))


def _leaf(counts, classes):
    return TreeNode(-1, 0.0, None, None, int(classes[np.argmax(counts)]), _frozen(counts.copy()))


def _best_split(x, class_idx, n_classes, min_leaf):
    """Scan all midpoint thresholds; return (decrease, feature, threshold) or None."""
    n = x.shape[0]
    total = np.bincount(class_idx, minlength=n_classes).astype(np.float64)
    parent = _gini(total)
    best = None
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        vals = x[order, f]
        left = np.zeros(n_classes)
        for split in range(1, n):
            left[class_idx[order[split - 1]]] += 1
            if vals[split] == vals[split - 1]:
                continue
            n_left = split
            n_right = n - split
            if n_left < min_leaf or n_right < min_leaf:
                continue
            weighted = (n_left * _gini(left) + n_right * _gini(total - left)) / n
            decrease = parent - weighted
            if decrease > 1e-12 and (best is None or decrease > best[0] + 1e-15):
                best = (decrease, f, 0.5 * (vals[split] + vals[split - 1]))
    return best


def tree_fit(d, min_leaf=1, max_depth=None):
    """Greedy Gini tree; splits stop on purity, min_leaf, or max_depth."""
    if min_leaf < 1:
        raise InvalidParameter("min_leaf must be >= 1")
    classes = d.classes
    class_idx = np.searchsorted(classes, d.y)

    def build(rows, depth):
        counts = np.bincount(class_idx[rows], minlength=classes.size).astype(np.float64)
        if (
            np.count_nonzero(counts) <= 1
            or rows.size < 2 * min_leaf
            or (max_depth is not None and depth >= max_depth)
        ):
            return _leaf(counts, classes)
        found = _best_split(d.x[rows], class_idx[rows], classes.size, min_leaf)
        if found is None:
            return _leaf(counts, classes)
        _, f, thr = found
        mask = d.x[rows, f] <= thr
        left = build(rows[mask], depth + 1)
        right = build(rows[~mask], depth + 1)
        return TreeNode(int(f), float(thr), left, right, int(classes[np.argmax(counts)]), _frozen(counts))

    return build(np.arange(d.n), 0)


def tree_predict(t, x):
    """Route each row to its leaf; x[feature] == threshold goes left."""
    x = as_sample_matrix(x)
    out = np.empty(x.shape[0], dtype=np.int64)
    for i in range(x.shape[0]):
        node = t
        while not node.is_leaf:
            if node.feature >= x.shape[1]:
                raise ShapeMismatch(
                    f"tree splits on feature {node.feature}, input has {x.shape[1]}"
                )
            node = node.left if x[i, node.feature] <= node.threshold else node.right
        out[i] = node.label
    return out
