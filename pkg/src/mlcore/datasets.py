"""Bundled example data."""

from importlib import resources

import numpy as np

from .core import classification_dataset


def iris_path():
    """Filesystem path of the bundled Iris CSV (4 features, integer label last)."""
    return resources.files("mlcore").joinpath("data/iris.csv")


def load_iris():
    """The classic 150-flower dataset as a classification LabeledDataset."""
    with resources.as_file(iris_path()) as p:
        data = np.loadtxt(p, delimiter=",")
    return classification_dataset(data[:, :4], data[:, 4].astype(np.int64))
