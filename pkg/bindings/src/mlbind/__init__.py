"""mlbind: estimator classes in the classic learn/pred/transform style.

Thin stateful wrappers over the mlcore library for interactive sessions:
``learn()`` fits in place, ``pred()`` tests, ``transform()`` projects.

    >>> import mlbind, numpy as np
    >>> pca = mlbind.PCA()
    >>> pca.learn(x)
    >>> x_pc = pca.transform(x, k=2)
    >>> svm = mlbind.SmoSvm(kernel_type='linear')
    >>> svm.learn(x_pc, labels)
    >>> mlbind.error(labels, svm.pred(x_pc))

Exposed names: SmoSvm (the native sequential-minimal-optimization SVM),
PCA, KernelRidge, ElasticNet, LDA, KNN, kmeans, dwt, dtw_std,
canberra_stability, error. Values are numerically identical to calling the
mlcore functions directly; data crosses the wrapper boundary by copy.
"""

import numpy as np

import mlcore

__all__ = [
    "NotFitted",
    "SmoSvm",
    "PCA",
    "KernelRidge",
    "ElasticNet",
    "LDA",
    "KNN",
    "kmeans",
    "dwt",
    "dtw_std",
    "canberra_stability",
    "error",
]

__version__ = "0.1.0"


class NotFitted(Exception):
    """Operation requires learn() to have been called first."""


class _Estimator:
    """Shared handle management: subclasses set self._model in learn()."""

    def __init__(self):
        self._model = None

    def _fitted(self):
        if self._model is None:
            raise NotFitted(f"{type(self).__name__}: call learn() before using the model")
        return self._model


def _kernel(kernel_type, gamma, degree, coef0):
    return mlcore.KernelSpec(kernel_type, gamma, degree, coef0)


class PCA(_Estimator):
    """Principal component analysis with learn()/transform()."""

    def learn(self, x):
        self._model = mlcore.pca_learn(np.array(x, dtype=np.float64))

    def transform(self, x, k):
        return mlcore.pca_transform(self._fitted(), np.array(x, dtype=np.float64), k)

    @property
    def coeff(self):
        """Transformation matrix: principal directions as rows."""
        return self._fitted().components

    @property
    def evals(self):
        return self._fitted().eigenvalues


class SmoSvm(_Estimator):
    """Support vector machine trained by the native SMO solver.

    kernel_type: linear | polynomial | gaussian | exponential | sigmoid.
    Multiclass problems train one-vs-one and predict by voting.
    """

    def __init__(self, kernel_type="linear", C=1.0, gamma=None, degree=3,
                 coef0=0.0, tol=1e-3):
        super().__init__()
        self.kernel_type = kernel_type
        self.C = C
        self.gamma = gamma
        self.degree = degree
        self.coef0 = coef0
        self.tol = tol

    def learn(self, x, y):
        d = mlcore.classification_dataset(np.array(x, dtype=np.float64), y)
        self._model = mlcore.svc_train(
            d,
            _kernel(self.kernel_type, self.gamma, self.degree, self.coef0),
            c=self.C,
            tol=self.tol,
        )

    def pred(self, x):
        return mlcore.svm_predict(self._fitted(), np.array(x, dtype=np.float64))

    def pred_values(self, x):
        """Raw decision values, one column per one-vs-one sub-problem."""
        return mlcore.decision_values(self._fitted(), np.array(x, dtype=np.float64))

    def hyperplane(self):
        """Linear-kernel weight vector(s); the model parameters."""
        return mlcore.linear_weights(self._fitted())


class KernelRidge(_Estimator):
    def __init__(self, lmb=1.0, kernel_type="linear", gamma=None, degree=3, coef0=0.0):
        super().__init__()
        self.lmb = lmb
        self.kernel_type = kernel_type
        self.gamma = gamma
        self.degree = degree
        self.coef0 = coef0

    def learn(self, x, y):
        d = mlcore.regression_dataset(np.array(x, dtype=np.float64), y)
        self._model = mlcore.kernel_ridge_fit_data(
            d, _kernel(self.kernel_type, self.gamma, self.degree, self.coef0), self.lmb
        )

    def pred(self, x):
        return mlcore.dual_predict_data(self._fitted(), np.array(x, dtype=np.float64))


class ElasticNet(_Estimator):
    def __init__(self, lam1=0.1, lam2=0.1, tol=1e-6, max_iter=10_000):
        super().__init__()
        self.lam1 = lam1
        self.lam2 = lam2
        self.tol = tol
        self.max_iter = max_iter

    def learn(self, x, y):
        d = mlcore.regression_dataset(np.array(x, dtype=np.float64), y)
        self._model = mlcore.elastic_net_fit(d, self.lam1, self.lam2, self.tol, self.max_iter)

    def pred(self, x):
        return mlcore.linear_predict(self._fitted(), np.array(x, dtype=np.float64))

    @property
    def beta(self):
        return self._fitted().weights


class LDA(_Estimator):
    def __init__(self, reg=None):
        super().__init__()
        self.reg = reg

    def learn(self, x, y):
        d = mlcore.classification_dataset(np.array(x, dtype=np.float64), y)
        self._model = mlcore.lda_fit(d, self.reg)

    def pred(self, x):
        return mlcore.discriminant_predict(self._fitted(), np.array(x, dtype=np.float64))


class KNN(_Estimator):
    def __init__(self, k=1):
        super().__init__()
        self.k = k

    def learn(self, x, y):
        d = mlcore.classification_dataset(np.array(x, dtype=np.float64), y)
        self._model = mlcore.knn_fit(d, self.k)

    def pred(self, x):
        return mlcore.knn_predict(self._fitted(), np.array(x, dtype=np.float64))


def kmeans(x, k, seed=0, max_iter=300, tol=1e-9):
    """Seeded Lloyd k-means; returns (assignments, centroids, inertia)."""
    result = mlcore.kmeans(np.array(x, dtype=np.float64), k, seed, max_iter, tol)
    return result.assignments, result.centroids, result.inertia


def dwt(x, wavelet="haar", levels=1):
    """Decimated wavelet transform; returns the mlcore coefficient pyramid."""
    return mlcore.dwt(np.asarray(x, dtype=np.float64), mlcore.wavelet_filter(wavelet), levels)


def dtw_std(x, y, dist_only=True, window=None):
    """Standard dynamic time warping on scalar series."""
    result = mlcore.dtw(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64), window)
    if dist_only:
        return result.distance
    return result.distance, result.path


def canberra_stability(lists, top_k=None):
    """Normalized Canberra indicator over ranked feature lists."""
    return mlcore.canberra_stability(lists, top_k=top_k)


def error(y_true, y_pred):
    """Prediction error rate (fraction of disagreeing labels)."""
    return mlcore.error_rate(y_true, y_pred)
