"""Binding outputs must be bit-equal to the mlcore CLI on fixed fixtures.

Fixture CSVs are written with shortest-round-trip float formatting, so both
paths consume the same 64-bit values; outputs are compared as the CLI's own
17-significant-digit records.
"""

import subprocess
import sys

import numpy as np
import pytest

import mlbind
from mlcore.datasets import iris_path
from mlcore.workflow import fmt_machine


def _run_cli(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "mlcore.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def _write_csv(path, x, y=None):
    rows = []
    for i in range(x.shape[0]):
        cells = [repr(float(v)) for v in x[i]]
        if y is not None:
            cells.append(str(int(y[i])) if np.issubdtype(np.asarray(y).dtype, np.integer) else repr(float(y[i])))
        rows.append(",".join(cells))
    path.write_text("\n".join(rows) + "\n")


def _predictions_from_records(stdout):
    values = {}
    for line in stdout.splitlines():
        if line.startswith("prediction."):
            key, _, value = line.partition("=")
            values[int(key.split(".")[1])] = value
    return [values[i] for i in range(len(values))]


@pytest.fixture()
def iris(tmp_path):
    data = np.loadtxt(iris_path(), delimiter=",")
    target = tmp_path / "iris.csv"
    target.write_bytes(iris_path().read_bytes())
    return data[:, :4], data[:, 4].astype(int), target


def test_fixture_knn_classification(tmp_path, iris):
    x, y, csv = iris
    _run_cli(
        ["fit", "--data", "iris.csv", "--estimator", "knn", "--param", "k=3",
         "--output", "knn.bin"],
        tmp_path,
    )
    cli_pred = _predictions_from_records(
        _run_cli(["predict", "--model", "knn.bin", "--data", "iris.csv"], tmp_path)
    )
    knn = mlbind.KNN(3)
    knn.learn(x, y)
    binding_pred = [str(int(v)) for v in knn.pred(x)]
    assert binding_pred == cli_pred


def test_fixture_kernel_ridge_regression(tmp_path):
    gen = np.random.default_rng(123)
    x = gen.normal(size=(40, 3))
    y = x @ np.array([1.5, -0.7, 0.2]) + 0.05 * gen.normal(size=40)
    csv = tmp_path / "reg.csv"
    _write_csv(csv, x, y)
    _run_cli(
        ["fit", "--data", "reg.csv", "--estimator", "kernel_ridge", "--task", "regress",
         "--param", "kernel=gaussian", "--param", "gamma=0.4", "--param", "lam=0.7",
         "--output", "kr.bin"],
        tmp_path,
    )
    cli_pred = _predictions_from_records(
        _run_cli(["predict", "--model", "kr.bin", "--data", "reg.csv"], tmp_path)
    )
    kr = mlbind.KernelRidge(lmb=0.7, kernel_type="gaussian", gamma=0.4)
    kr.learn(x, y)
    binding_pred = [fmt_machine(float(v)) for v in kr.pred(x)]
    assert binding_pred == cli_pred  # bit-equal through 17-digit formatting


def test_fixture_pca_then_linear_svm(tmp_path, iris):
    x, y, csv = iris
    # stage 1: the projection itself must match bit for bit
    cli_scores = _run_cli(
        ["transform", "--data", "iris.csv", "--method", "pca", "--k", "2"], tmp_path
    ).strip().splitlines()
    pca = mlbind.PCA()
    pca.learn(x)
    iris_pc = pca.transform(x, k=2)
    binding_scores = [
        ",".join(fmt_machine(float(v)) for v in row) for row in iris_pc
    ]
    assert binding_scores == cli_scores

    # stage 2: classify the projected data identically
    pc_csv = tmp_path / "iris_pc.csv"
    _write_csv(pc_csv, iris_pc, y)
    _run_cli(
        ["fit", "--data", "iris_pc.csv", "--estimator", "svc",
         "--param", "kernel=linear", "--param", "c=1.0", "--output", "svc.bin"],
        tmp_path,
    )
    cli_pred = _predictions_from_records(
        _run_cli(["predict", "--model", "svc.bin", "--data", "iris_pc.csv"], tmp_path)
    )
    svm = mlbind.SmoSvm(kernel_type="linear", C=1.0)
    svm.learn(iris_pc, y)
    binding_pred = [str(int(v)) for v in svm.pred(iris_pc)]
    assert binding_pred == cli_pred
    assert mlbind.error(y, svm.pred(iris_pc)) == pytest.approx(5.0 / 150.0)
