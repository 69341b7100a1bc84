"""Principal component analysis, linear and kernelized.

Covariance is normalized by n - 1. Components are deterministic: eigenpairs
sort by descending eigenvalue and each eigenvector is flipped so its
largest-magnitude entry is positive. Eigenvalues within -1e-10 of zero are
clamped to exactly 0.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_sample_matrix
from .errors import InvalidData, InvalidParameter, ShapeMismatch
from .kernels import center_gram, validate_square_gram
from .linear import _frozen


def _fix_signs(vectors):
    """Flip eigenvector columns so the largest-|entry| of each is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # rows are principal directions, descending eigenvalue
    eigenvalues: np.ndarray


def pca_learn(x):
    """Eigendecomposition of the sample covariance of centered x."""
    x = as_sample_matrix(x)
    if x.shape[0] < 2:
        raise InvalidData("pca_learn needs at least 2 samples")
    mean = x.mean(axis=0)
    xc = x - mean
    cov = xc.T @ xc / (x.shape[0] - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = _fix_signs(eigvecs[:, order])
    eigvals = np.where(eigvals < 0, 0.0, eigvals)
    return PcaModel(_frozen(mean), _frozen(eigvecs.T.copy()), _frozen(eigvals))


def pca_transform(m, x, k):
    """Project rows of x onto the first k principal components."""
    x = as_sample_matrix(x)
    if not 1 <= k <= m.components.shape[0]:
        raise InvalidParameter(f"k must be in [1, {m.components.shape[0]}], got {k}")
    if x.shape[1] != m.mean.shape[0]:
        raise ShapeMismatch(f"{x.shape[1]} features, model has {m.mean.shape[0]}")
    return (x - m.mean) @ m.components[:k].T


def pca_inverse(m, scores):
    """Map k-dimensional scores back to the original feature space."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim == 1:
        scores = scores.reshape(-1, 1)
    k = scores.shape[1]
    if not 1 <= k <= m.components.shape[0]:
        raise InvalidParameter(f"scores have {k} columns, model has {m.components.shape[0]}")
    return scores @ m.components[:k] + m.mean


@dataclass(frozen=True)
class KpcaModel:
    """Kernel PCA on a precomputed training Gram.

    ``alphas`` are dual eigenvectors scaled by 1/sqrt(eigenvalue); transforming
    the raw training Gram rows reproduces the training scores sqrt(l) * v.
    ``x_train``/``kernel`` are kept only when fit from raw data.
    """

    alphas: np.ndarray
    eigenvalues: np.ndarray
    row_means: np.ndarray
    total_mean: float
    x_train: np.ndarray | None = None
    kernel: object | None = None

    @property
    def n_components(self):
        return self.eigenvalues.shape[0]


def kpca_learn(k, eig_tol=1e-10):
    """Eigendecompose the centered Gram; keep components with eigenvalue > tol."""
    k = validate_square_gram(k)
    kc = center_gram(k)
    eigvals, eigvecs = np.linalg.eigh(kc)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = _fix_signs(eigvecs[:, order])
    keep = eigvals > eig_tol
    eigvals = eigvals[keep]
    alphas = eigvecs[:, keep] / np.sqrt(eigvals)
    return KpcaModel(
        _frozen(alphas),
        _frozen(eigvals),
        _frozen(k.mean(axis=0)),
        float(k.mean()),
    )


def kpca_transform(m, k_rows, k):
    """Score new points from their raw kernel rows against the training set."""
    k_rows = np.asarray(k_rows, dtype=np.float64)
    if k_rows.ndim == 1:
        k_rows = k_rows.reshape(1, -1)
    if not 1 <= k <= m.n_components:
        raise InvalidParameter(
            f"k must be in [1, {m.n_components}] (positive eigenvalues), got {k}"
        )
    if k_rows.shape[1] != m.row_means.shape[0]:
        raise ShapeMismatch("kernel row length differs from training size")
    centered = (
        k_rows
        - k_rows.mean(axis=1, keepdims=True)
        - m.row_means[None, :]
        + m.total_mean
    )
    return centered @ m.alphas[:, :k]


def kpca_learn_data(x, kernel, eig_tol=1e-10):
    """Kernel PCA from raw data; retains what transform-from-data needs."""
    from .kernels import gram

    x = as_sample_matrix(x)
    base = kpca_learn(gram(kernel, x), eig_tol)
    return KpcaModel(
        base.alphas, base.eigenvalues, base.row_means, base.total_mean, x, kernel
    )


def kpca_transform_data(m, x, k):
    from .kernels import gram

    if m.x_train is None:
        raise InvalidParameter("model holds no training data; pass kernel rows instead")
    return kpca_transform(m, gram(m.kernel, as_sample_matrix(x), m.x_train), k)
