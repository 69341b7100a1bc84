#!/usr/bin/env python3
"""Run the whole classifier catalog over one dataset with 5-fold CV.

Multiclass-capable estimators see the full 3-class Iris problem; the
binary-only ones (golub, fda, kfda, parzen, logistic, perceptron) get the
versicolor-vs-virginica subproblem, which is the hard pair.
"""

from mlcore import classification_dataset, load_iris
from mlcore.workflow import ESTIMATORS, WorkflowConfig, run_workflow

iris = load_iris()
mask = iris.y != 0
binary = classification_dataset(iris.x[mask], iris.y[mask])

MULTICLASS = ["svc", "lda", "dlda", "max_likelihood", "knn", "tree"]
BINARY_ONLY = ["golub", "fda", "kfda", "parzen", "logistic", "perceptron"]

print(f"{'estimator':<16} {'task':<22} {'cv error':<10} stdev")
for name in MULTICLASS + BINARY_ONLY:
    dataset = iris if name in MULTICLASS else binary
    label = "iris (3 classes)" if name in MULTICLASS else "iris (2 hard classes)"
    params = {}
    if name == "knn":
        params["k"] = "5"
    if name == "svc":
        params.update(kernel="gaussian", c="10.0")
    if name == "kfda":
        params.update(kernel="gaussian", reg="1e-3")
    if name == "parzen":
        params.update(kernel="gaussian", gamma="0.25")
    if name == "logistic":
        params.update(lam="0.01")
    cfg = WorkflowConfig(
        task="classify",
        estimator=name,
        seed=20,
        params=params,
        resampling={"scheme": "stratified", "folds": "5"},
    )
    report = run_workflow(cfg, dataset=dataset)
    assert report.ok, report.failures
    print(f"{name:<16} {label:<22} {report.mean_error:<10.4f} {report.stdev_error:.4f}")

print(f"\n(available estimators: {', '.join(sorted(ESTIMATORS))})")
