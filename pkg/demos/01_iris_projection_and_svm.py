#!/usr/bin/env python3
"""Project Iris onto its first two principal components, then train and
self-test a linear support vector classifier on the projected points.

This is the canonical smoke test for the whole stack: the expected
self-test error is 5/150 = 0.0333.
"""

import numpy as np

from mlcore import (
    KernelSpec,
    classification_dataset,
    error_rate,
    load_iris,
    pca_learn,
    pca_transform,
    svc_train,
    svm_predict,
)

iris = load_iris()
print(f"iris: {iris.n} samples, {iris.p} features, classes {iris.classes.tolist()}")

# dimensionality reduction to the dominant plane
pca = pca_learn(iris.x)
explained = pca.eigenvalues[:2].sum() / pca.eigenvalues.sum()
iris_pc = pca_transform(pca, iris.x, k=2)
print(f"top-2 principal components explain {explained:.1%} of the variance")

# linear-kernel C-SVC on the projected data, tested on the same data
svm = svc_train(classification_dataset(iris_pc, iris.y), KernelSpec("linear"), c=1.0)
labels_pred = svm_predict(svm, iris_pc)
err = error_rate(iris.y, labels_pred)
print(f"self-test error: {err:.4f} ({int(round(err * iris.n))}/{iris.n} misclassified)")

wrong = np.flatnonzero(labels_pred != iris.y)
print(f"misclassified sample indices: {wrong.tolist()}")
