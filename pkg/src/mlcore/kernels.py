"""Common kernel layer.

Every kernel-based estimator accepts either raw data plus a KernelSpec or a
precomputed Gram matrix, mirroring one shared contract:

    linear       k(x, y) = <x, y>
    polynomial   k(x, y) = (gamma <x, y> + coef0) ** degree
    gaussian     k(x, y) = exp(-gamma ||x - y||^2)
    exponential  k(x, y) = exp(-gamma ||x - y||)
    sigmoid      k(x, y) = tanh(gamma <x, y> + coef0)

gamma defaults to 1 / n_features when left unset. The sigmoid kernel is not
positive semidefinite in general; solvers must not assume PSD for it.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_sample_matrix
from .errors import InvalidParameter, ShapeMismatch

KINDS = ("linear", "polynomial", "gaussian", "exponential", "sigmoid", "precomputed")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel kind plus parameters; parameters a kind ignores are stored untouched.

    gamma=None means "1 / feature count", resolved when data is seen.
    """

    kind: str = "linear"
    gamma: float | None = None
    degree: int = 3
    coef0: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown kernel kind {self.kind!r}")
        if self.gamma is not None and self.gamma <= 0 and self.kind in (
            "gaussian",
            "exponential",
        ):
            raise InvalidParameter("gamma must be > 0 for gaussian/exponential")
        if self.degree < 1:
            raise InvalidParameter("degree must be >= 1")

    def resolve_gamma(self, n_features):
        return 1.0 / n_features if self.gamma is None else float(self.gamma)


def kernel_eval(spec, x, y):
    """Evaluate the kernel on a single pair of equally-sized feature vectors."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ShapeMismatch(f"vectors of length {x.size} vs {y.size}")
    return float(gram(spec, x.reshape(1, -1), y.reshape(1, -1))[0, 0])


def gram(spec, x, y=None):
    """Kernel matrix between the rows of x and the rows of y (default: x itself)."""
    if spec.kind == "precomputed":
        raise InvalidParameter("cannot compute a Gram matrix for kind='precomputed'")
    x = as_sample_matrix(x)
    self_gram = y is None
    y = x if self_gram else as_sample_matrix(y)
    if x.shape[1] != y.shape[1]:
        raise ShapeMismatch(f"{x.shape[1]} vs {y.shape[1]} features")
    g = spec.resolve_gamma(x.shape[1])

    if spec.kind in ("linear", "polynomial", "sigmoid"):
        inner = x @ y.T
        if spec.kind == "linear":
            k = inner
        elif spec.kind == "polynomial":
            k = (g * inner + spec.coef0) ** spec.degree
        else:
            k = np.tanh(g * inner + spec.coef0)
    else:
        sq = (
            np.sum(x * x, axis=1)[:, None]
            + np.sum(y * y, axis=1)[None, :]
            - 2.0 * (x @ y.T)
        )
        np.maximum(sq, 0.0, out=sq)
        if spec.kind == "gaussian":
            k = np.exp(-g * sq)
        else:
            k = np.exp(-g * np.sqrt(sq))

    if self_gram:
        # exact symmetry regardless of float summation order
        k = 0.5 * (k + k.T)
    return k


def validate_square_gram(k):
    k = np.asarray(k, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ShapeMismatch(f"expected square Gram matrix, got {k.shape}")
    if not np.allclose(k, k.T, atol=1e-10, rtol=0.0):
        raise ShapeMismatch("Gram matrix is not symmetric")
    return k


def center_gram(k):
    """Feature-space centering K - 1K - K1 + 1K1 with 1 the all-(1/n) matrix.

    Row and column sums of the result vanish; the operation is idempotent.
    """
    k = validate_square_gram(k)
    row = k.mean(axis=0, keepdims=True)
    col = k.mean(axis=1, keepdims=True)
    total = k.mean()
    out = k - row - col + total
    return 0.5 * (out + out.T)
