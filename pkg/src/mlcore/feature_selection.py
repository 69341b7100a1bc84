"""Feature ranking and ranked-list stability.

RFE repeatedly refits a linear trainer and drops the features with the
smallest squared weights; KFDA-RFE scores a feature by how much the kernel
Fisher criterion drops when the feature is removed from the Gram. I-Relief
learns nonnegative unit-norm feature weights from probabilistic hit/miss
margins. The Canberra indicator measures reproducibility of ranked lists
across resampling runs.
"""

from dataclasses import dataclass

import numpy as np

from .core import encode_labels
from .discriminant import kfda_fit
from .errors import InvalidLists, InvalidParameter, TrainerError
from .kernels import KernelSpec, gram
from .linear import _frozen


@dataclass(frozen=True)
class FeatureRanking:
    """Permutation of feature indices, position 0 = most important.

    ``scores`` records the squared weight (or criterion impact) each feature
    had in the round it was eliminated.
    """

    order: np.ndarray
    scores: np.ndarray | None = None


def _round_drop_order(scores, remaining, n_drop):
    """Indices to eliminate this round: smallest score first, ties drop the higher index."""
    keys = sorted(range(len(remaining)), key=lambda i: (scores[i], -remaining[i]))
    return [remaining[i] for i in keys[:n_drop]]


def rfe(trainer, d, step=1):
    """Recursive feature elimination over a linear-model trainer.

    ``trainer(x, y) -> LinearModel`` is refit from scratch on every surviving
    feature subset; each round the ``step`` features with smallest squared
    weight are dropped. The ranking is the reversed elimination order.
    """
    if step < 1:
        raise InvalidParameter("step must be >= 1")
    remaining = list(range(d.p))
    eliminated = []
    elim_scores = {}
    last_w2 = None
    while len(remaining) > 1:
        try:
            model = trainer(d.x[:, remaining], d.y)
        except Exception as e:
            raise TrainerError(
                f"trainer failed on {len(remaining)} features: {e}", features=remaining
            ) from e
        w2 = np.asarray(model.weights, dtype=np.float64) ** 2
        last_w2 = dict(zip(remaining, w2))
        drop = _round_drop_order(w2, remaining, min(step, len(remaining) - 1))
        for f in drop:
            eliminated.append(f)
            elim_scores[f] = last_w2[f]
            remaining.remove(f)
    for f in remaining:  # survivor keeps its final-fit score
        elim_scores[f] = last_w2[f] if last_w2 else 0.0
        eliminated.append(f)
    order = np.asarray(eliminated[::-1], dtype=np.int64)
    scores = np.asarray([elim_scores[f] for f in order], dtype=np.float64)
    return FeatureRanking(_frozen(order), _frozen(scores))


def _fisher_criterion(kmat, labels, reg):
    model = kfda_fit(kmat, labels, reg)
    # alpha solves (N + reg I) alpha = d, so the optimal quotient is d' alpha
    return float(model.direction @ _kfda_diff(kmat, labels))


def _kfda_diff(kmat, labels):
    y_pm, _ = encode_labels(labels)
    pos = kmat[:, y_pm > 0].mean(axis=1)
    neg = kmat[:, y_pm < 0].mean(axis=1)
    return pos - neg


def kfda_rfe(d, reg=1e-3, step=1, kernel=KernelSpec("linear"), gram_builder=None):
    """RFE scored by the drop in the kernel Fisher criterion per removed feature.

    ``gram_builder(feature_indices) -> Gram`` defaults to evaluating ``kernel``
    on the corresponding columns of the training data.
    """
    if step < 1:
        raise InvalidParameter("step must be >= 1")
    if gram_builder is None:
        gram_builder = lambda idx: gram(kernel, d.x[:, idx])
    remaining = list(range(d.p))
    eliminated = []
    elim_scores = {}
    last_j = 0.0
    while len(remaining) > 1:
        try:
            j_full = _fisher_criterion(gram_builder(remaining), d.y, reg)
            impact = []
            for f in remaining:
                subset = [g for g in remaining if g != f]
                j_without = _fisher_criterion(gram_builder(subset), d.y, reg)
                impact.append(j_full - j_without)
        except Exception as e:
            raise TrainerError(
                f"criterion failed on {len(remaining)} features: {e}", features=remaining
            ) from e
        last_j = j_full
        drop = _round_drop_order(impact, remaining, min(step, len(remaining) - 1))
        by_feature = dict(zip(remaining, impact))
        for f in drop:
            eliminated.append(f)
            elim_scores[f] = by_feature[f]
            remaining.remove(f)
    for f in remaining:  # survivor scored by the criterion of the last full fit
        elim_scores[f] = last_j
        eliminated.append(f)
    order = np.asarray(eliminated[::-1], dtype=np.int64)
    scores = np.asarray([elim_scores[f] for f in order], dtype=np.float64)
    return FeatureRanking(_frozen(order), _frozen(scores))


@dataclass(frozen=True)
class IReliefResult:
    weights: np.ndarray
    converged: bool
    iterations: int


def irelief(d, sigma=1.0, max_iter=1000, tol=1e-6):
    """Iterative Relief feature weighting for binary problems.

    Hit/miss probabilities use the kernel exp(-dist/sigma) over distances
    weighted by the current iterate; weights are the positive part of the
    expected margin, normalized to unit L2 norm. Returns the last iterate
    with ``converged=False`` instead of raising when the cap is reached.
    """
    if sigma <= 0:
        raise InvalidParameter("sigma must be > 0")
    y_pm, _ = encode_labels(d.y)
    x = d.x
    n, p = x.shape
    w = np.full(p, 1.0 / np.sqrt(p))
    for it in range(1, int(max_iter) + 1):
        nu = np.zeros(p)
        for i in range(n):
            diffs = np.abs(x - x[i])  # n x p
            dist = diffs @ w
            same = y_pm == y_pm[i]
            hits = same.copy()
            hits[i] = False
            misses = ~same
            contrib = np.zeros(p)
            for mask, sign in ((misses, +1.0), (hits, -1.0)):
                if not mask.any():
                    continue
                dm = dist[mask]
                prob = np.exp(-(dm - dm.min()) / sigma)
                prob /= prob.sum()
                contrib += sign * (prob @ diffs[mask])
            nu += contrib / n
        new = np.maximum(nu, 0.0)
        norm = np.linalg.norm(new)
        if norm == 0:
            new = np.full(p, 1.0 / np.sqrt(p))  # degenerate margin, keep uniform
        else:
            new = new / norm
        delta = np.linalg.norm(new - w)
        w = new
        if delta < tol:
            return IReliefResult(_frozen(w), True, it)
    return IReliefResult(_frozen(w), False, int(max_iter))


def _rank_vectors(lists, p, top_k):
    ranks = np.empty((len(lists), p), dtype=np.float64)
    for i, lst in enumerate(lists):
        lst = np.asarray(lst, dtype=np.int64)
        if top_k is None:
            if lst.size != p or np.any(np.sort(lst) != np.arange(p)):
                raise InvalidLists(f"list {i} is not a permutation of 0..{p - 1}")
            ranks[i, lst] = np.arange(1, p + 1)
        else:
            if lst.size > p or np.unique(lst).size != lst.size:
                raise InvalidLists(f"list {i} has repeats or wrong length")
            if lst.size and (lst.min() < 0 or lst.max() >= p):
                raise InvalidLists(f"list {i} indexes outside the universe of size {p}")
            ranks[i] = top_k + 1
            head = lst[: min(lst.size, p)]
            ranks[i, head] = np.minimum(np.arange(1, head.size + 1), top_k + 1)
    return ranks


def canberra_expected(p, top_k=None):
    """Exact expected Canberra distance between two uniform random rank vectors.

    Coordinates of independent uniform permutations are marginally uniform on
    1..p, so the expectation is (1/p) * sum_{a,b} |t(a)-t(b)| / (t(a)+t(b))
    with t the top-k truncation (identity when top_k is None).
    """
    a = np.arange(1, p + 1, dtype=np.float64)
    if top_k is not None:
        a = np.minimum(a, top_k + 1)
    num = np.abs(a[:, None] - a[None, :])
    den = a[:, None] + a[None, :]
    return float((num / den).sum() / p)


def canberra_distance(r, s):
    r = np.asarray(r, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    return float(np.sum(np.abs(r - s) / (r + s)))


def canberra_stability(lists, top_k=None, p=None, normalize=True):
    """Mean pairwise Canberra distance between rank vectors of the given lists.

    Lists are permutations of feature indices, position 0 = most important;
    with ``top_k`` set, ranks beyond k collapse to k+1 (complemented-rank
    truncation) and lists may be bare top-k prefixes if the universe size
    ``p`` is passed. Normalization divides by the exact expected distance
    between two independent uniform random permutations, so ~1 means "no more
    stable than chance" and 0 means identical lists.
    """
    lists = [np.asarray(l, dtype=np.int64) for l in lists]
    if len(lists) < 2:
        raise InvalidLists("need at least 2 lists")
    if p is None:
        p = max(int(l.size) for l in lists)
    if top_k is not None and not 1 <= top_k <= p:
        raise InvalidParameter(f"top_k must be in [1, {p}]")
    ranks = _rank_vectors(lists, p, top_k)
    b = len(lists)
    total = 0.0
    for i in range(b):
        for j in range(i + 1, b):
            total += canberra_distance(ranks[i], ranks[j])
    raw = total / (b * (b - 1) / 2)
    if not normalize:
        return raw
    return raw / canberra_expected(p, top_k)
