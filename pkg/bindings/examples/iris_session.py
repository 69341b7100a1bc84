#!/usr/bin/env python3
"""The classic interactive session: PCA projection, SVM train, self-test.

Expected output: a prediction error of 0.033 (5 of 150 samples).
"""

import numpy as np

import mlbind
from mlcore.datasets import iris_path

data = np.loadtxt(iris_path(), delimiter=",")
iris, labels = data[:, :4], data[:, 4].astype(int)
print(f"iris.shape = {iris.shape}")

pca = mlbind.PCA()                       # build a new PCA instance
pca.learn(iris)                          # fit it on the iris attributes
iris_pc = pca.transform(iris, k=2)       # project onto the first 2 PCs
print(f"projected shape = {iris_pc.shape}")

svm = mlbind.SmoSvm(kernel_type="linear")  # native SMO classifier
svm.learn(iris_pc, labels)                 # train on the projected data
labels_pred = svm.pred(iris_pc)            # test on the same data
print(f"error = {mlbind.error(labels, labels_pred):.3f}")
