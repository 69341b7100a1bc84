"""Support vector machines trained by sequential minimal optimization.

The solver handles the generic box-constrained dual

    min_a  0.5 a' Q a + p' a    s.t.  y' a = 0,  0 <= a <= C

with maximal-violating-pair working-set selection and a first-order stopping
rule m(a) - M(a) <= tol. C-classification and epsilon-regression are both
mapped onto this problem (regression through the doubled variable vector).
Multiclass problems train one-vs-one sub-models and predict by voting.

Defaults follow the common SVM conventions: C=1, tol=1e-3, gamma=1/p.
No shrinking is performed; the iteration budget corresponds to roughly 1e7
kernel evaluations.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_sample_matrix, encode_labels
from .errors import (
    InvalidParameter,
    NotConverged,
    ShapeMismatch,
    UnsupportedKernel,
)
from .kernels import KernelSpec, gram, validate_square_gram
from .linear import LinearModel, _frozen

_TAU = 1e-12


def smo_solve(kmat, y, p, c, tol, max_iter=None):
    """Run SMO on the generic dual. Returns (alpha, rho, objective, iterations).

    ``kmat`` is the raw kernel matrix; Q = (y y') * kmat is formed implicitly
    column by column. ``objective`` is the minimization value
    0.5 a'Qa + p'a. Raises NotConverged when the iteration budget runs out.
    """
    n = kmat.shape[0]
    y = np.asarray(y, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if max_iter is None:
        # ~1e7 cached kernel-column reads, but never fewer than 100 sweeps;
        # degenerate (rank-deficient) duals crawl under first-order selection
        max_iter = max(10_000_000 // max(2 * n, 1), 100 * n, 50_000)
    alpha = np.zeros(n)
    grad = p.copy()

    for it in range(max_iter):
        neg_yg = -y * grad
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
        if not up.any() or not low.any():
            break
        masked = np.where(up, neg_yg, -np.inf)
        i = int(np.argmax(masked))
        m_up = masked[i]
        masked = np.where(low, neg_yg, np.inf)
        j = int(np.argmin(masked))
        m_low = masked[j]
        if m_up - m_low <= tol:
            break

        qi = y * (y[i] * kmat[:, i])
        qj = y * (y[j] * kmat[:, j])
        old_i, old_j = alpha[i], alpha[j]
        if y[i] != y[j]:
            quad = kmat[i, i] + kmat[j, j] + 2.0 * kmat[i, j] * y[i] * y[j]
            quad = quad if quad > 0 else _TAU
            delta = (-grad[i] - grad[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            else:
                if alpha[i] < 0:
                    alpha[i] = 0.0
                    alpha[j] = -diff
            if diff > 0:
                if alpha[i] > c:
                    alpha[i] = c
                    alpha[j] = c - diff
            else:
                if alpha[j] > c:
                    alpha[j] = c
                    alpha[i] = c + diff
        else:
            quad = kmat[i, i] + kmat[j, j] - 2.0 * kmat[i, j]
            quad = quad if quad > 0 else _TAU
            delta = (grad[i] - grad[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > c:
                if alpha[i] > c:
                    alpha[i] = c
                    alpha[j] = total - c
            else:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = total
            if total > c:
                if alpha[j] > c:
                    alpha[j] = c
                    alpha[i] = total - c
            else:
                if alpha[i] < 0:
                    alpha[i] = 0.0
                    alpha[j] = total
        grad += qi * (alpha[i] - old_i) + qj * (alpha[j] - old_j)
    else:
        raise NotConverged(
            f"SMO: m - M = {m_up - m_low:g} > tol after {max_iter} iterations",
            model=(alpha, grad),
        )

    rho = _calculate_rho(alpha, grad, y, c)
    objective = 0.5 * float(alpha @ (grad + p))
    return alpha, rho, objective, it


def _calculate_rho(alpha, grad, y, c):
    yg = y * grad
    free = (alpha > 0) & (alpha < c)
    if free.any():
        return float(yg[free].mean())
    upper = alpha >= c
    lower = alpha <= 0
    ub = np.inf
    lb = -np.inf
    sel_ub = (upper & (y < 0)) | (lower & (y > 0))
    sel_lb = (upper & (y > 0)) | (lower & (y < 0))
    if sel_ub.any():
        ub = yg[sel_ub].min()
    if sel_lb.any():
        lb = yg[sel_lb].max()
    return float((ub + lb) / 2.0)


@dataclass(frozen=True)
class SvmSubModel:
    """One binary problem: global support indices, coefs alpha_i*y_i, bias rho."""

    class_neg: int
    class_pos: int
    support: np.ndarray
    coefs: np.ndarray
    rho: float
    objective: float


@dataclass(frozen=True)
class SvmModel:
    task: str  # "svc" | "svr"
    kernel: KernelSpec
    classes: np.ndarray | None
    sub_models: tuple
    x_train: np.ndarray | None
    n_train: int
    c: float
    epsilon: float = 0.0

    @property
    def support_indices(self):
        out = np.unique(np.concatenate([s.support for s in self.sub_models]))
        return out


def _training_gram(d, kernel):
    if kernel.kind == "precomputed":
        k = validate_square_gram(d.x)
        return k, None
    x = as_sample_matrix(d.x)
    return gram(kernel, x), x


def svc_train(d, kernel=KernelSpec("linear"), c=1.0, tol=1e-3):
    """C-support vector classification; one-vs-one for more than two classes."""
    if c <= 0:
        raise InvalidParameter("C must be > 0")
    kmat, x = _training_gram(d, kernel)
    _, classes = encode_labels(d.y)
    subs = []
    for a_i in range(classes.size):
        for b_i in range(a_i + 1, classes.size):
            cls_a, cls_b = classes[a_i], classes[b_i]
            idx = np.flatnonzero((d.y == cls_a) | (d.y == cls_b))
            y_pm = np.where(d.y[idx] == cls_a, -1.0, 1.0)
            sub_k = kmat[np.ix_(idx, idx)]
            alpha, rho, obj, _ = smo_solve(sub_k, y_pm, -np.ones(idx.size), c, tol)
            sv = alpha > 0
            subs.append(
                SvmSubModel(
                    int(cls_a),
                    int(cls_b),
                    _frozen(idx[sv].astype(np.int64)),
                    _frozen(alpha[sv] * y_pm[sv]),
                    rho,
                    obj,
                )
            )
    return SvmModel("svc", kernel, classes, tuple(subs), x, d.n, float(c))


def svr_train(d, kernel=KernelSpec("linear"), c=1.0, epsilon=0.1, tol=1e-3):
    """Epsilon-insensitive support vector regression."""
    if c <= 0:
        raise InvalidParameter("C must be > 0")
    if epsilon < 0:
        raise InvalidParameter("epsilon must be >= 0")
    kmat, x = _training_gram(d, kernel)
    n = d.n
    big_k = np.tile(kmat, (2, 2))
    y_ext = np.concatenate([np.ones(n), -np.ones(n)])
    p_ext = np.concatenate([epsilon - d.y, epsilon + d.y])
    alpha, rho, obj, _ = smo_solve(big_k, y_ext, p_ext, c, tol)
    coefs = alpha[:n] - alpha[n:]
    sv = coefs != 0
    sub = SvmSubModel(
        0, 0, _frozen(np.flatnonzero(sv).astype(np.int64)), _frozen(coefs[sv]), rho, obj
    )
    return SvmModel("svr", kernel, None, (sub,), x, n, float(c), float(epsilon))


def _cross_kernel(m, x):
    """Rows of k(query, training); accepts raw queries or precomputed rows."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if m.kernel.kind == "precomputed":
        if x.shape[1] != m.n_train:
            raise ShapeMismatch(
                f"precomputed rows need {m.n_train} columns, got {x.shape[1]}"
            )
        return x
    if x.shape[1] != m.x_train.shape[1]:
        raise ShapeMismatch(f"{x.shape[1]} features, model has {m.x_train.shape[1]}")
    return gram(m.kernel, x, m.x_train)


def decision_values(m, x):
    """Per-sub-model decision values f(x) = sum_i coef_i k(x_i, x) - rho."""
    rows = _cross_kernel(m, x)
    return np.column_stack(
        [rows[:, s.support] @ s.coefs - s.rho for s in m.sub_models]
    )


def svm_predict(m, x):
    """Voted class labels for classification, f(x) for regression.

    A sub-model decision of exactly 0 votes for the larger label; voting ties
    go to the lowest class index.
    """
    values = decision_values(m, x)
    if m.task == "svr":
        return values[:, 0]
    votes = np.zeros((values.shape[0], m.classes.size), dtype=np.int64)
    class_index = {int(c): i for i, c in enumerate(m.classes)}
    for s_i, s in enumerate(m.sub_models):
        winners = np.where(
            values[:, s_i] >= 0, class_index[s.class_pos], class_index[s.class_neg]
        )
        votes[np.arange(values.shape[0]), winners] += 1
    return m.classes[np.argmax(votes, axis=1)]


def linear_weights(m):
    """Collapse a linear-kernel model into explicit hyperplane coefficients.

    Binary classification and regression give one LinearModel; one-vs-one
    multiclass gives a list of (negative class, positive class, LinearModel).
    """
    if m.kernel.kind != "linear":
        raise UnsupportedKernel(f"kernel {m.kernel.kind!r} has no primal weights")
    out = []
    for s in m.sub_models:
        w = m.x_train[s.support].T @ s.coefs
        classes = None
        if m.task == "svc":
            classes = np.asarray([s.class_neg, s.class_pos], dtype=np.int64)
        out.append((s.class_neg, s.class_pos, LinearModel(_frozen(w), -s.rho, classes)))
    if len(out) == 1:
        return out[0][2]
    return out
