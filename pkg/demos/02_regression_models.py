#!/usr/bin/env python3
"""Tour of the regression catalog on one synthetic problem.

A sparse linear signal with correlated noise features, fit by every
regressor in the library; reports held-out mean squared error.
"""

import numpy as np

from mlcore import (
    KernelSpec,
    dual_predict_data,
    elastic_net_fit,
    kernel_ridge_fit_data,
    lars_fit,
    linear_predict,
    monte_carlo_split,
    ols_fit,
    pls_fit,
    pls_predict,
    regression_dataset,
    ridge_fit,
    svm_predict,
    svr_train,
)

gen = np.random.default_rng(5)
n, p = 120, 8
x = gen.normal(size=(n, p))
true_w = np.array([3.0, -2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
y = x @ true_w + 0.4 * gen.normal(size=n)

(train, test), = monte_carlo_split(n, 0.75, 1, seed=1)
d_train = regression_dataset(x[train], y[train])


def mse(pred):
    return float(np.mean((pred - y[test]) ** 2))


ols = ols_fit(d_train)
print(f"ols            mse={mse(linear_predict(ols, x[test])):.4f}")

ridge = ridge_fit(d_train, lam=1.0)
print(f"ridge          mse={mse(linear_predict(ridge, x[test])):.4f}")

kr = kernel_ridge_fit_data(d_train, KernelSpec("gaussian", gamma=0.1), lam=0.5)
print(f"kernel ridge   mse={mse(dual_predict_data(kr, x[test])):.4f}")

enet = elastic_net_fit(d_train, lam1=0.05, lam2=0.05)
kept = np.flatnonzero(enet.weights != 0)
print(f"elastic net    mse={mse(linear_predict(enet, x[test])):.4f}  active={kept.tolist()}")

path = lars_fit(d_train)
print(f"lars           entry order {path.order}")
print(f"lars (full)    mse={mse(linear_predict(path.model_at(), x[test])):.4f}")

pls = pls_fit(d_train, n_components=3)
print(f"pls (3 comp)   mse={mse(pls_predict(pls, x[test])):.4f}")

svr = svr_train(d_train, KernelSpec("linear"), c=10.0, epsilon=0.2)
print(f"linear svr     mse={mse(svm_predict(svr, x[test])):.4f}")
