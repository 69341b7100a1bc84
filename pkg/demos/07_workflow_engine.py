#!/usr/bin/env python3
"""The resampled-workflow engine and its selection-bias guard.

Feature selection must be refit inside each training fold; selecting on the
full dataset before cross-validation leaks test labels and produces
optimistically biased error estimates. This script shows the engine doing
it right: with shuffled (signal-free) labels the honest CV error sits at
the 50% baseline, while the leaky protocol reports a much lower number.

The same workflows are runnable from the shell, e.g.:

    mlcore cv --config workflow.ini --output report
"""

import numpy as np

from mlcore import classification_dataset, error_rate, kfold, knn_fit, knn_predict
from mlcore.workflow import RANKERS, WorkflowConfig, render_human, run_workflow

gen = np.random.default_rng(2718)
n, p = 60, 500
x = gen.normal(size=(n, p))
y = gen.permutation(np.array([0] * (n // 2) + [1] * (n // 2)))  # no signal at all
d = classification_dataset(x, y)

cfg = WorkflowConfig(
    task="classify",
    estimator="knn",
    seed=99,
    params={"k": "3"},
    resampling={"scheme": "stratified", "folds": "5"},
    ranking={"method": "golub", "keep": "10"},
)
report = run_workflow(cfg, dataset=d)
print(render_human(report))
print(f"honest rank-inside-CV error: {report.mean_error:.3f} (baseline 0.500)")

# the WRONG way, for contrast: select features once on all labels, then CV
order = RANKERS["golub"](d, {}, 0)
leaky_cols = np.sort(order[:10])
errors = []
for train, test in kfold(n, 5, seed=99, stratify_on=y).splits():
    m = knn_fit(classification_dataset(x[np.ix_(train, leaky_cols)], y[train]), 3)
    errors.append(error_rate(y[test], knn_predict(m, x[np.ix_(test, leaky_cols)])))
print(f"leaky select-then-CV error:  {np.mean(errors):.3f} (optimistic bias)")
