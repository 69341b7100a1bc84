"""Linear and kernelized regression/classification fits.

Closed-form solvers (OLS, ridge, kernel ridge), iterative solvers
(elastic net by coordinate descent, logistic regression by damped Newton,
perceptron), and path algorithms (LARS, PLS1). All fits return immutable
models; ``linear_predict`` serves both regression and sign classification.

Default hyperparameters: ridge lam=1.0, elastic net lam1=lam2=0.1,
perceptron alpha=0.1, tol=1e-6, max_iter=10_000.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import as_sample_matrix, decode_labels, encode_labels
from .errors import InvalidParameter, NotConverged, ShapeMismatch
from .kernels import validate_square_gram


@dataclass(frozen=True)
class LinearModel:
    """Weight vector plus intercept; ``classes`` set when fit for classification."""

    weights: np.ndarray
    intercept: float
    classes: np.ndarray | None = None
    obj_history: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class DualModel:
    """Dual-coefficient model: prediction is <coefs, k(z, train)> + intercept."""

    dual_coefs: np.ndarray
    intercept: float
    x_train: np.ndarray | None = None
    kernel: object | None = None


def _frozen(a):
    a = np.ascontiguousarray(a)
    if a.dtype == np.float32 or not (
        np.issubdtype(a.dtype, np.floating)
        or np.issubdtype(a.dtype, np.integer)
        or np.issubdtype(a.dtype, np.complexfloating)
    ):
        a = a.astype(np.float64)
    a.flags.writeable = False
    return a


def _center(d):
    x_mean = d.x.mean(axis=0)
    y_mean = d.y.mean()
    return d.x - x_mean, d.y - y_mean, x_mean, y_mean


def _standardize(x):
    mean = x.mean(axis=0)
    std = np.sqrt(np.mean((x - mean) ** 2, axis=0))
    std = np.where(std > 0, std, 1.0)  # constant columns pass through with weight 0
    return (x - mean) / std, mean, std


def ols_fit(d):
    """Least squares with intercept; rank-deficient designs get the minimum-norm w."""
    xc, yc, x_mean, y_mean = _center(d)
    w = np.linalg.pinv(xc) @ yc
    return LinearModel(_frozen(w), float(y_mean - w @ x_mean))


def ridge_fit(d, lam=1.0):
    """L2-penalized least squares; the intercept is not penalized."""
    if lam < 0:
        raise InvalidParameter(f"ridge lambda must be >= 0, got {lam}")
    xc, yc, x_mean, y_mean = _center(d)
    if lam == 0:
        w = np.linalg.pinv(xc) @ yc
    else:
        p = xc.shape[1]
        w = np.linalg.solve(xc.T @ xc + lam * np.eye(p), xc.T @ yc)
    return LinearModel(_frozen(w), float(y_mean - w @ x_mean))


def kernel_ridge_fit(k, y, lam=1.0):
    """Dual ridge on a precomputed square Gram matrix.

    dual = (K + lam I)^-1 (y - mean(y)); prediction at z adds mean(y) back.
    Build K from centered data to reproduce primal ridge with a linear kernel.
    """
    if lam <= 0:
        raise InvalidParameter(f"kernel ridge needs lambda > 0, got {lam}")
    k = validate_square_gram(k)
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != k.shape[0]:
        raise ShapeMismatch(f"Gram is {k.shape} but {y.shape[0]} targets")
    y_mean = y.mean()
    coefs = np.linalg.solve(k + lam * np.eye(k.shape[0]), y - y_mean)
    return DualModel(_frozen(coefs), float(y_mean))


def kernel_ridge_fit_data(d, kernel, lam=1.0):
    """Kernel ridge from raw data; the Gram is built internally over d.x."""
    from .kernels import gram

    base = kernel_ridge_fit(gram(kernel, d.x), d.y, lam)
    return DualModel(base.dual_coefs, base.intercept, d.x, kernel)


def dual_predict_data(m, x):
    from .kernels import gram

    if m.x_train is None:
        raise InvalidParameter("model holds no training data; pass kernel rows instead")
    return dual_predict(m, gram(m.kernel, as_sample_matrix(x), m.x_train))


def dual_predict(m, k_rows):
    """Evaluate a DualModel on cross-kernel rows k(z_i, x_train_j)."""
    k_rows = np.asarray(k_rows, dtype=np.float64)
    if k_rows.ndim == 1:
        k_rows = k_rows.reshape(1, -1)
    if k_rows.shape[1] != m.dual_coefs.shape[0]:
        raise ShapeMismatch(
            f"{k_rows.shape[1]} kernel columns but {m.dual_coefs.shape[0]} training points"
        )
    return k_rows @ m.dual_coefs + m.intercept


def _soft(z, t):
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def elastic_net_fit(d, lam1=0.1, lam2=0.1, tol=1e-6, max_iter=10_000):
    """Coordinate descent for (1/2n)||y - Xw - b||^2 + lam1 ||w||_1 + (lam2/2) ||w||^2.

    Columns are standardized internally; returned weights live in the original
    feature space. Converged when no coefficient moves more than ``tol`` in a
    sweep. The per-sweep objective trace is kept on the model for inspection.
    """
    if lam1 < 0 or lam2 < 0:
        raise InvalidParameter("elastic net penalties must be >= 0")
    xs, x_mean, x_std = _standardize(d.x)
    y_mean = d.y.mean()
    yc = d.y - y_mean
    n, p = xs.shape
    w = np.zeros(p)
    r = yc.copy()  # residual yc - xs @ w
    history = []

    def objective():
        return float(
            0.5 * np.dot(r, r) / n + lam1 * np.abs(w).sum() + 0.5 * lam2 * np.dot(w, w)
        )

    converged = False
    for _ in range(int(max_iter)):
        max_delta = 0.0
        for j in range(p):
            wj = w[j]
            rho = np.dot(xs[:, j], r) / n + wj  # (1/n)<x_j, r + w_j x_j>, unit variance
            new = _soft(rho, lam1) / (1.0 + lam2)
            if new != wj:
                r += (wj - new) * xs[:, j]
                w[j] = new
            max_delta = max(max_delta, abs(new - wj))
        history.append(objective())
        if max_delta < tol:
            converged = True
            break

    w_orig = w / x_std
    model = LinearModel(
        _frozen(w_orig),
        float(y_mean - w_orig @ x_mean),
        obj_history=tuple(history),
    )
    if not converged:
        raise NotConverged(
            f"elastic net: no convergence in {max_iter} sweeps", model=model
        )
    return model


@dataclass(frozen=True)
class LarsPath:
    """Forward LARS path: one (entered feature, coefficient snapshot) per step.

    Snapshots are in the original feature space. ``model_at(i)`` builds the
    LinearModel (with intercept) as of step i; the default is the final step.
    """

    steps: tuple
    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: float

    @property
    def order(self):
        return [f for f, _ in self.steps]

    def model_at(self, i=-1):
        w = self.steps[i][1]
        return LinearModel(w, float(self.y_mean - w @ self.x_mean))


def lars_fit(d, max_steps=None):
    """Classic forward LARS (no lasso drops) on standardized columns.

    Features enter in order of absolute current correlation; coefficients
    advance along the equiangular direction until the next feature ties.
    The final unconstrained step lands on the OLS solution of the active set.
    """
    xs, x_mean, x_std = _standardize(d.x)
    y_mean = d.y.mean()
    r = d.y - y_mean
    n, p = xs.shape
    max_steps = p if max_steps is None else min(int(max_steps), p)

    w = np.zeros(p)
    active = []
    inactive = list(range(p))
    steps = []
    for _ in range(max_steps):
        c = xs.T @ (r - xs @ w)
        if not active:
            j = int(np.argmax(np.abs(c[inactive])))
            j = inactive[j]
            active.append(j)
            inactive.remove(j)
        c_abs = np.abs(c[active[0]])
        if c_abs < 1e-12:
            break
        s = np.sign(c[active])
        xa = xs[:, active] * s
        g = xa.T @ xa
        try:
            ginv_one = np.linalg.solve(g, np.ones(len(active)))
        except np.linalg.LinAlgError:
            break
        a_norm = 1.0 / np.sqrt(np.ones(len(active)) @ ginv_one)
        omega = a_norm * ginv_one
        u = xa @ omega  # unit equiangular vector
        big_c = float(np.abs(c[active]).max())
        a = xs.T @ u

        gamma = big_c / a_norm  # full step: kills active correlation (OLS on active)
        next_j = None
        for j in inactive:
            for num, den in ((big_c - c[j], a_norm - a[j]), (big_c + c[j], a_norm + a[j])):
                if abs(den) < 1e-15:
                    continue
                cand = num / den
                if 1e-12 < cand < gamma:
                    gamma = cand
                    next_j = j
        w_active = np.asarray(w[active])
        w_active = w_active + gamma * omega * s
        w[active] = w_active
        entered = active[-1]
        steps.append((entered, _frozen(w / x_std)))
        if next_j is None:
            break
        active.append(next_j)
        inactive.remove(next_j)

    return LarsPath(tuple(steps), _frozen(x_mean.copy()), _frozen(x_std.copy()), float(y_mean))


@dataclass(frozen=True)
class PlsModel:
    """Single-response PLS (NIPALS deflation)."""

    n_components: int
    x_weights: np.ndarray
    x_loadings: np.ndarray
    y_loadings: np.ndarray
    x_mean: np.ndarray
    y_mean: float

    @property
    def coefficients(self):
        """Accumulated regression vector B with prediction (x - mean) @ B + y_mean."""
        if self.n_components == 0:
            return np.zeros(self.x_mean.shape[0])
        pw = self.x_loadings.T @ self.x_weights
        return self.x_weights @ np.linalg.solve(pw, self.y_loadings)


def pls_fit(d, n_components):
    """PLS1 regression with ``n_components`` latent directions."""
    n, p = d.x.shape
    limit = min(n - 1, p)
    if not 1 <= n_components <= limit:
        raise InvalidParameter(
            f"n_components must be in [1, {limit}], got {n_components}"
        )
    x = d.x - d.x.mean(axis=0)
    y = d.y - d.y.mean()
    ws, ps, qs = [], [], []
    for _ in range(int(n_components)):
        cov = x.T @ y
        norm = np.linalg.norm(cov)
        if norm < 1e-12:
            break  # response fully deflated; remaining components are null
        w = cov / norm
        t = x @ w
        tt = float(t @ t)
        if tt < 1e-12:
            break
        p_load = x.T @ t / tt
        q = float(y @ t / tt)
        x = x - np.outer(t, p_load)
        y = y - q * t
        ws.append(w)
        ps.append(p_load)
        qs.append(q)
    k = len(ws)
    if k == 0:
        ws_m = np.zeros((p, 0))
        ps_m = np.zeros((p, 0))
        qs_v = np.zeros(0)
    else:
        ws_m = np.column_stack(ws)
        ps_m = np.column_stack(ps)
        qs_v = np.asarray(qs)
    return PlsModel(
        k, _frozen(ws_m), _frozen(ps_m), _frozen(qs_v),
        _frozen(d.x.mean(axis=0)), float(d.y.mean()),
    )


def pls_predict(m, x):
    x = as_sample_matrix(x)
    if x.shape[1] != m.x_mean.shape[0]:
        raise ShapeMismatch(f"{x.shape[1]} features, model has {m.x_mean.shape[0]}")
    return (x - m.x_mean) @ m.coefficients + m.y_mean


def logistic_loss_grad(w, b, x, y_pm, lam):
    """Mean logistic loss with (lam/2)||w||^2 and its gradient in (w, b)."""
    n = x.shape[0]
    f = x @ w + b
    t = y_pm * f
    loss = float(np.mean(np.logaddexp(0.0, -t)) + 0.5 * lam * np.dot(w, w))
    sig = 1.0 / (1.0 + np.exp(np.clip(t, -500, 500)))  # sigma(-t)
    gw = -(x.T @ (y_pm * sig)) / n + lam * w
    gb = -float(np.mean(y_pm * sig))
    return loss, gw, gb


def logistic_fit(d, lam=0.0, tol=1e-6, max_iter=10_000):
    """Binary logistic regression by damped Newton.

    Exits when the gradient norm drops below ``tol``. On separable data with
    lam=0 the optimum is at infinity; if the iteration cap is reached with
    mean loss below 1e-2 the last (finite) iterate is returned, otherwise
    NotConverged carries it.
    """
    y_pm, classes = encode_labels(d.y)
    if classes.size != 2:
        raise InvalidParameter("logistic_fit is binary only")
    y_pm = y_pm.astype(np.float64)
    x = d.x
    n, p = x.shape
    w = np.zeros(p)
    b = 0.0
    loss, gw, gb = logistic_loss_grad(w, b, x, y_pm, lam)
    for _ in range(int(max_iter)):
        grad_norm = np.sqrt(np.dot(gw, gw) + gb * gb)
        if grad_norm < tol:
            return LinearModel(_frozen(w), float(b), classes)
        f = x @ w + b
        s = 1.0 / (1.0 + np.exp(-np.clip(f, -500, 500)))
        d2 = s * (1.0 - s) / n
        xa = np.hstack([x, np.ones((n, 1))])
        h = xa.T @ (xa * d2[:, None])
        h[:p, :p] += lam * np.eye(p)
        h[np.diag_indices_from(h)] += 1e-12
        step = np.linalg.solve(h, np.concatenate([gw, [gb]]))
        # halve until the loss actually decreases
        t = 1.0
        for _halve in range(60):
            w_new = w - t * step[:p]
            b_new = b - t * step[p]
            loss_new, gw_new, gb_new = logistic_loss_grad(w_new, b_new, x, y_pm, lam)
            if loss_new <= loss:
                break
            t *= 0.5
        if loss_new > loss:
            break  # no descent direction left at float precision
        w, b, loss, gw, gb = w_new, b_new, loss_new, gw_new, gb_new
    model = LinearModel(_frozen(w), float(b), classes)
    if loss < 1e-2:
        return model
    raise NotConverged(f"logistic regression: gradient norm {np.linalg.norm(gw):g} after cap", model=model)


def perceptron_fit(d, alpha=0.1, epochs=100):
    """Classic mistake-driven perceptron in fixed sample order.

    Updates w += alpha*y*x, b += alpha*y whenever y(wx+b) <= 0; stops early
    after a mistake-free pass. Non-separable data just runs out the epoch
    budget.
    """
    if alpha <= 0:
        raise InvalidParameter("learning rate must be > 0")
    y_pm, classes = encode_labels(d.y)
    if classes.size != 2:
        raise InvalidParameter("perceptron_fit is binary only")
    x = d.x
    w = np.zeros(x.shape[1])
    b = 0.0
    for _ in range(int(epochs)):
        mistakes = 0
        for i in range(x.shape[0]):
            if y_pm[i] * (x[i] @ w + b) <= 0:
                w = w + alpha * y_pm[i] * x[i]
                b = b + alpha * y_pm[i]
                mistakes += 1
        if mistakes == 0:
            break
    return LinearModel(_frozen(w), float(b), classes)


def linear_predict(m, x, task="regression"):
    """Apply a LinearModel: raw values for regression, sign decoding for classification.

    The decision value 0 maps to the +1 side.
    """
    x = as_sample_matrix(x)
    if x.shape[1] != m.weights.shape[0]:
        raise ShapeMismatch(f"{x.shape[1]} features, model has {m.weights.shape[0]}")
    f = x @ m.weights + m.intercept
    if task == "regression":
        return f
    if task != "classification":
        raise InvalidParameter(f"unknown task {task!r}")
    enc = np.where(f >= 0, 1, -1)
    if m.classes is None:
        return enc
    return decode_labels(enc, m.classes)
