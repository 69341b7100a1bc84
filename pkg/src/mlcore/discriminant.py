"""Discriminant-analysis family.

LDA, DLDA and the full-covariance Gaussian maximum-likelihood classifier are
natively multiclass (argmax over per-class discriminants, lowest class index
on ties). FDA, KFDA and the Golub classifier are binary only. SRDA produces
c-1 discriminant directions by spectral regression.

Pooled covariance uses the n - c normalization, per-class covariance n_c - 1,
so constructing classes with identical sample covariances makes LDA and the
maximum-likelihood classifier agree exactly. ``reg=None`` selects the default
ridge 1e-6 * trace / p applied to the covariance or scatter; pass 0 to forbid
regularization (singular matrices then raise).
"""

from dataclasses import dataclass

import numpy as np

from .core import as_sample_matrix, encode_labels
from .errors import (
    InvalidData,
    InvalidLabels,
    InvalidParameter,
    ShapeMismatch,
    SingularCovariance,
)
from .kernels import validate_square_gram
from .linear import LinearModel, _frozen


@dataclass(frozen=True)
class GaussianClassModel:
    """Per-class Gaussian summary; ``kind`` selects the discriminant rule.

    kind = "lda":  shared covariance (full), stored once
    kind = "dlda": shared covariance, diagonal only
    kind = "ml":   one full covariance per class
    """

    kind: str
    classes: np.ndarray
    means: np.ndarray
    priors: np.ndarray
    covariance: np.ndarray


@dataclass(frozen=True)
class DiscriminantDirection:
    """Single discriminant direction (primal weights or dual coefficients).

    Projections above ``threshold`` belong to the positive (larger-label)
    class. ``dual`` marks kernel-space coefficient vectors; such models keep
    ``x_train``/``kernel`` when fit from raw data so they can build their own
    kernel rows.
    """

    direction: np.ndarray
    threshold: float
    classes: np.ndarray
    dual: bool = False
    x_train: np.ndarray | None = None
    kernel: object | None = None


def _auto_reg(matrix, reg):
    if reg is None:
        return 1e-6 * np.trace(np.atleast_2d(matrix)) / matrix.shape[-1]
    if reg < 0:
        raise InvalidParameter("regularization must be >= 0")
    return float(reg)


def _class_stats(d):
    classes = d.classes
    means = np.stack([d.x[d.y == c].mean(axis=0) for c in classes])
    counts = np.array([(d.y == c).sum() for c in classes])
    return classes, means, counts


def _pooled_covariance(d, means):
    n, p = d.x.shape
    s = np.zeros((p, p))
    for c, mu in zip(d.classes, means):
        xc = d.x[d.y == c] - mu
        s += xc.T @ xc
    return s / (n - d.classes.size)


def _spd_inverse(sigma, context):
    eigvals, eigvecs = np.linalg.eigh(sigma)
    floor = sigma.shape[0] * np.finfo(np.float64).eps * max(eigvals.max(), 0.0)
    if eigvals.min() <= floor:
        raise SingularCovariance(f"{context}: covariance not positive definite")
    return (eigvecs / eigvals) @ eigvecs.T


def lda_fit(d, reg=None):
    """Linear discriminant analysis with a pooled within-class covariance."""
    classes, means, counts = _class_stats(d)
    sigma = _pooled_covariance(d, means)
    sigma = sigma + _auto_reg(sigma, reg) * np.eye(sigma.shape[0])
    _spd_inverse(sigma, "lda_fit")  # fail fast on singular input
    return GaussianClassModel(
        "lda", classes, _frozen(means), _frozen(counts / d.n), _frozen(sigma)
    )


def dlda_fit(d, reg=None):
    """LDA with the pooled covariance replaced by its diagonal."""
    classes, means, counts = _class_stats(d)
    diag = np.diag(_pooled_covariance(d, means)).copy()
    diag += _auto_reg(np.diag(diag), reg)
    if np.any(diag <= 0):
        raise SingularCovariance("dlda_fit: zero-variance feature with reg=0")
    return GaussianClassModel(
        "dlda", classes, _frozen(means), _frozen(counts / d.n), _frozen(diag)
    )


def max_likelihood_fit(d, reg=None):
    """Per-class full Gaussian density classifier (quadratic boundaries)."""
    classes, means, counts = _class_stats(d)
    p = d.p
    covs = np.empty((classes.size, p, p))
    for i, (c, mu) in enumerate(zip(classes, means)):
        xc = d.x[d.y == c]
        if xc.shape[0] < 2:
            raise InvalidData(f"class {c} has fewer than 2 samples")
        centered = xc - mu
        cov = centered.T @ centered / (xc.shape[0] - 1)
        covs[i] = cov + _auto_reg(cov, reg) * np.eye(p)
        _spd_inverse(covs[i], "max_likelihood_fit")
    return GaussianClassModel(
        "ml", classes, _frozen(means), _frozen(counts / d.n), _frozen(covs)
    )


def discriminant_scores(m, x):
    """Per-class discriminant values delta_c(x); argmax is the prediction."""
    x = as_sample_matrix(x)
    if x.shape[1] != m.means.shape[1]:
        raise ShapeMismatch(f"{x.shape[1]} features, model has {m.means.shape[1]}")
    log_priors = np.log(m.priors)
    if m.kind in ("lda", "dlda"):
        if m.kind == "lda":
            sigma_inv = _spd_inverse(m.covariance, "discriminant_scores")
        else:
            sigma_inv = np.diag(1.0 / m.covariance)
        proj = sigma_inv @ m.means.T  # p x c
        return x @ proj - 0.5 * np.sum(m.means.T * proj, axis=0) + log_priors
    scores = np.empty((x.shape[0], m.classes.size))
    for i in range(m.classes.size):
        sigma_inv = _spd_inverse(m.covariance[i], "discriminant_scores")
        sign, logdet = np.linalg.slogdet(m.covariance[i])
        diff = x - m.means[i]
        maha = np.sum((diff @ sigma_inv) * diff, axis=1)
        scores[:, i] = -0.5 * (logdet + maha) + log_priors[i]
    return scores


def discriminant_predict(m, x):
    scores = discriminant_scores(m, x)
    return m.classes[np.argmax(scores, axis=1)]


def golub_fit(d):
    """Golub signal-to-noise classifier: w_j = (mu+ - mu-) / (s+ + s-).

    Features whose class standard deviations are both zero get weight 0.
    Prediction is the sign of <w, x - midpoint>.
    """
    _, classes = encode_labels(d.y)
    if classes.size != 2:
        raise InvalidLabels("golub_fit is binary only")
    neg = d.x[d.y == classes[0]]
    pos = d.x[d.y == classes[1]]
    if neg.shape[0] < 2 or pos.shape[0] < 2:
        raise InvalidData("golub_fit needs >= 2 samples per class")
    denom = pos.std(axis=0, ddof=1) + neg.std(axis=0, ddof=1)
    num = pos.mean(axis=0) - neg.mean(axis=0)
    w = np.divide(num, denom, out=np.zeros_like(num), where=denom > 0)
    midpoint = 0.5 * (pos.mean(axis=0) + neg.mean(axis=0))
    return LinearModel(_frozen(w), float(-w @ midpoint), classes)


def fda_fit(d, reg=None):
    """Fisher discriminant: direction prop. to (S_w + reg I)^-1 (mu+ - mu-).

    S_w is the unnormalized within-class scatter. The returned direction has
    unit norm and points from the smaller-label class mean to the larger; the
    threshold sits at the projected midpoint of the class means.
    """
    _, classes = encode_labels(d.y)
    if classes.size != 2:
        raise InvalidLabels("fda_fit is binary only")
    neg = d.x[d.y == classes[0]]
    pos = d.x[d.y == classes[1]]
    sw = np.zeros((d.p, d.p))
    for block in (neg, pos):
        centered = block - block.mean(axis=0)
        sw += centered.T @ centered
    sw = sw + _auto_reg(sw, reg) * np.eye(d.p)
    diff = pos.mean(axis=0) - neg.mean(axis=0)
    try:
        direction = np.linalg.solve(sw, diff)
    except np.linalg.LinAlgError:
        raise SingularCovariance("fda_fit: singular within-class scatter") from None
    norm = np.linalg.norm(direction)
    if norm == 0 or not np.all(np.isfinite(direction)):
        raise SingularCovariance("fda_fit: degenerate direction")
    direction = direction / norm
    threshold = float(direction @ (pos.mean(axis=0) + neg.mean(axis=0)) / 2.0)
    return DiscriminantDirection(_frozen(direction), threshold, classes)


def fda_project(m, x):
    x = as_sample_matrix(x)
    if x.shape[1] != m.direction.shape[0]:
        raise ShapeMismatch(f"{x.shape[1]} features, direction has {m.direction.shape[0]}")
    return x @ m.direction


def fda_predict(m, x):
    return np.where(fda_project(m, x) > m.threshold, m.classes[1], m.classes[0])


def kfda_fit(k, labels, reg=1e-3):
    """Kernel Fisher discriminant on a precomputed Gram matrix.

    Solves (N + reg I) alpha = m+ - m- with N the within-class scatter in
    kernel space and m_c the class kernel means; projections of new points
    are <alpha, k(z, x_train)>.
    """
    if reg <= 0:
        raise InvalidParameter("kfda_fit requires reg > 0")
    k = validate_square_gram(k)
    y_pm, classes = encode_labels(labels)
    if classes.size != 2:
        raise InvalidLabels("kfda_fit is binary only")
    if y_pm.shape[0] != k.shape[0]:
        raise ShapeMismatch("label count differs from Gram size")
    n = k.shape[0]
    scatter = np.zeros((n, n))
    kernel_means = []
    for sign in (-1, 1):
        idx = np.flatnonzero(y_pm == sign)
        kc = k[:, idx]
        mc = kc.mean(axis=1)
        scatter += kc @ kc.T - idx.size * np.outer(mc, mc)
        kernel_means.append(mc)
    diff = kernel_means[1] - kernel_means[0]
    alpha = np.linalg.solve(scatter + reg * np.eye(n), diff)
    threshold = float(alpha @ (kernel_means[1] + kernel_means[0]) / 2.0)
    return DiscriminantDirection(_frozen(alpha), threshold, classes, dual=True)


def kfda_project(m, k_rows):
    """Project points given their kernel rows against the training set."""
    k_rows = np.asarray(k_rows, dtype=np.float64)
    if k_rows.ndim == 1:
        k_rows = k_rows.reshape(1, -1)
    if k_rows.shape[1] != m.direction.shape[0]:
        raise ShapeMismatch("kernel row length differs from training size")
    return k_rows @ m.direction


def kfda_predict(m, k_rows):
    return np.where(kfda_project(m, k_rows) > m.threshold, m.classes[1], m.classes[0])


def kfda_fit_data(d, kernel, reg=1e-3):
    """Fit a kernel Fisher discriminant from raw data."""
    from .kernels import gram

    base = kfda_fit(gram(kernel, d.x), d.y, reg)
    return DiscriminantDirection(
        base.direction, base.threshold, base.classes, dual=True,
        x_train=d.x, kernel=kernel,
    )


def kfda_predict_data(m, x):
    from .kernels import gram

    if m.x_train is None:
        raise InvalidParameter("model holds no training data; pass kernel rows instead")
    return kfda_predict(m, gram(m.kernel, as_sample_matrix(x), m.x_train))


@dataclass(frozen=True)
class SrdaModel:
    """Spectral-regression discriminant directions (one column per direction)."""

    directions: np.ndarray
    x_mean: np.ndarray
    classes: np.ndarray

    def transform(self, x):
        x = as_sample_matrix(x)
        if x.shape[1] != self.x_mean.shape[0]:
            raise ShapeMismatch("feature count differs from training")
        return (x - self.x_mean) @ self.directions


def srda_fit(d, alpha=0.0):
    """Spectral regression discriminant analysis.

    Class-indicator responses are Gram-Schmidt orthogonalized against the
    constant vector (the dependent last indicator drops out), then each
    response is ridge-regressed on centered X. Columns of ``directions`` are
    the c-1 regression solutions.
    """
    if alpha < 0:
        raise InvalidParameter("ridge penalty must be >= 0")
    classes = d.classes
    if classes is None or classes.size < 2:
        raise InvalidLabels("srda_fit requires a classification dataset")
    n = d.n
    basis = [np.ones(n) / np.sqrt(n)]
    responses = []
    for c in classes:
        v = (d.y == c).astype(np.float64)
        for b in basis:
            v = v - (v @ b) * b
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            v = v / norm
            basis.append(v)
            responses.append(v)
    resp = np.column_stack(responses)  # n x (c-1)
    xc = d.x - d.x.mean(axis=0)
    if alpha == 0:
        directions = np.linalg.lstsq(xc, resp, rcond=None)[0]
    else:
        p = xc.shape[1]
        directions = np.linalg.solve(xc.T @ xc + alpha * np.eye(p), xc.T @ resp)
    return SrdaModel(_frozen(directions), _frozen(d.x.mean(axis=0)), classes)
