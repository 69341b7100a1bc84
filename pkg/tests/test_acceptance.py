"""Acceptance suite: one test per release criterion, each printing a verdict.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines. Tolerances are fixed here and nowhere else.
"""

import time

import numpy as np

from mlcore.clustering import kmeans, linkage, linkage_memory_saving, pdist
from mlcore.core import classification_dataset, error_rate, regression_dataset
from mlcore.datasets import load_iris
from mlcore.decomposition import kpca_learn, kpca_transform, pca_learn, pca_transform
from mlcore.discriminant import fda_fit, fda_project, kfda_fit, kfda_project
from mlcore.feature_selection import canberra_stability
from mlcore.kernels import KernelSpec, gram
from mlcore.linear import (
    dual_predict,
    elastic_net_fit,
    kernel_ridge_fit,
    linear_predict,
    ols_fit,
    ridge_fit,
)
from mlcore.rng import make_rng
from mlcore.svm import smo_solve, svc_train, svm_predict
from mlcore.timeseries import dtw, dwt, idwt, udwt, wavelet_filter
from mlcore.workflow import WorkflowConfig, render_records, run_workflow

from oracles import dtw_brute_force, naive_linkage, normal_equations, qp_solve


def _verdict(name, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    assert ok, name


def test_iris_reproduction():
    started = time.perf_counter()
    d = load_iris()
    model = pca_learn(d.x)
    scores = pca_transform(model, d.x, 2)
    svm_model = svc_train(classification_dataset(scores, d.y), KernelSpec("linear"), c=1.0)
    err = error_rate(d.y, svm_predict(svm_model, scores))
    elapsed = time.perf_counter() - started
    print(f"  iris self-test error = {err:.6f} ({round(err * 150)}/150), {elapsed:.3f}s")
    _verdict("iris: pca(2) + linear svc(C=1) error in [0.020, 0.047]", 0.020 <= err <= 0.047)
    _verdict("iris: runtime under 1 s", elapsed < 1.0)


def test_svm_dual_matches_qp_oracle():
    started = time.perf_counter()
    gen = np.random.default_rng(20240817)
    worst = 0.0
    for trial in range(50):
        n = int(gen.integers(4, 21))
        x = gen.normal(size=(n, int(gen.integers(1, 4))))
        y = np.where(gen.random(n) < 0.5, -1.0, 1.0)
        if np.all(y == y[0]):
            y[0] = -y[0]
        c = float(gen.uniform(0.1, 10.0))
        kind = ("linear", "gaussian", "polynomial")[trial % 3]
        spec = KernelSpec(kind, gamma=float(gen.uniform(0.2, 1.5)), degree=2, coef0=0.5)
        k = gram(spec, x)
        tol = 1e-6
        alpha, rho, obj_smo, _ = smo_solve(k, y, -np.ones(n), c, tol)
        _, obj_ref = qp_solve(k, y, -np.ones(n), c)
        worst = max(worst, abs(obj_smo - obj_ref))
        assert obj_smo <= obj_ref + 1e-4
        # KKT / feasibility invariants
        assert np.all(alpha >= -1e-12) and np.all(alpha <= c + 1e-12)
        assert abs(alpha @ y) <= 1e-6
        grad = (np.outer(y, y) * k) @ alpha - 1.0
        f = y * (grad + 1.0) - rho  # decision values at training points
        margins = y * f
        interior = (alpha > tol) & (alpha < c - tol)
        assert np.all(np.abs(margins[interior] - 1.0) <= 1e-3 * 10)
        assert np.all(alpha[margins < 1.0 - 1e-2] >= c - 1e-6)
    elapsed = time.perf_counter() - started
    print(f"  50 problems, worst objective gap {worst:.2e}, {elapsed:.1f}s")
    _verdict("svm: SMO dual within 1e-4 of dense-QP oracle on 50 problems", worst <= 1e-4)
    _verdict("svm: oracle suite under 30 s", elapsed < 30.0)


def test_closed_form_suites():
    gen = np.random.default_rng(7)

    x = gen.normal(size=(25, 4))
    y = x @ gen.normal(size=4) + 0.3 * gen.normal(size=25) + 0.8
    d = regression_dataset(x, y)
    w_ref, b_ref = normal_equations(x, y)
    m = ols_fit(d)
    ok_ols = np.allclose(m.weights, w_ref, atol=1e-8) and abs(m.intercept - b_ref) < 1e-8
    _verdict("closed form: OLS equals normal equations (1e-8)", ok_ols)

    lam = 0.7
    primal = ridge_fit(d, lam)
    xc = x - x.mean(axis=0)
    dual = kernel_ridge_fit(gram(KernelSpec("linear"), xc), y, lam)
    z = gen.normal(size=(12, 4))
    pred_dual = dual_predict(dual, gram(KernelSpec("linear"), z - x.mean(axis=0), xc))
    ok_ridge = np.allclose(pred_dual, linear_predict(primal, z), atol=1e-6)
    _verdict("closed form: ridge primal equals kernel-ridge dual (1e-6)", ok_ridge)

    enet = elastic_net_fit(d, 0.0, 0.0, tol=1e-12, max_iter=200_000)
    ok_enet = np.allclose(enet.weights, m.weights, atol=1e-6)
    _verdict("closed form: elastic net at zero penalty equals OLS (1e-6)", ok_enet)

    xb = np.vstack([gen.normal(size=(15, 3)), gen.normal(size=(15, 3)) + 2.0])
    yb = np.array([0] * 15 + [1] * 15)
    db = classification_dataset(xb, yb)
    fda = fda_fit(db, reg=1e-8)
    kfda = kfda_fit(gram(KernelSpec("linear"), xb), yb, reg=1e-8)
    z = gen.normal(size=(40, 3)) + 1.0
    corr = np.corrcoef(
        fda_project(fda, z), kfda_project(kfda, gram(KernelSpec("linear"), z, xb))
    )[0, 1]
    _verdict("closed form: KFDA(linear) correlates with FDA (1 - 1e-6)", abs(corr) >= 1 - 1e-6)

    xp = gen.normal(size=(20, 5))
    pca = pca_learn(xp)
    kp = kpca_learn(gram(KernelSpec("linear"), xp))
    s_pca = pca_transform(pca, xp, 4)
    s_kpca = kpca_transform(kp, gram(KernelSpec("linear"), xp, xp), 4)
    ok_kpca = True
    for col in range(4):
        a, b = s_pca[:, col], s_kpca[:, col]
        sign = 1.0 if a @ b >= 0 else -1.0
        ok_kpca = ok_kpca and np.allclose(a, sign * b, atol=1e-8)
    _verdict("closed form: KPCA(linear) equals PCA scores up to column sign", ok_kpca)


def test_wavelet_suite():
    gen = np.random.default_rng(9)
    worst_rt = 0.0
    worst_parseval = 0.0
    for name in ("haar", "d4"):
        w = wavelet_filter(name)
        for n in (8, 16, 32, 64, 128, 256, 512, 1024):
            for levels in range(1, 5):
                if 2**levels > n:
                    continue
                x = gen.normal(size=n)
                c = dwt(x, w, levels)
                worst_rt = max(worst_rt, float(np.abs(idwt(c, w) - x).max()))
                energy = sum(float(dd @ dd) for dd in c.details) + float(
                    c.approximation @ c.approximation
                )
                worst_parseval = max(worst_parseval, abs(energy - float(x @ x)))
    print(f"  worst round-trip {worst_rt:.2e}, worst Parseval gap {worst_parseval:.2e}")
    _verdict("wavelets: DWT/IDWT round-trip < 1e-10 (haar, d4; 8..1024; 1..4 levels)", worst_rt < 1e-10)
    _verdict("wavelets: Parseval < 1e-10", worst_parseval < 1e-10)

    worst_shift = 0.0
    for name in ("haar", "d4"):
        w = wavelet_filter(name)
        for n in (16, 50, 127):
            x = gen.normal(size=n)
            for shift in (1, 3, 7):
                direct = udwt(np.roll(x, shift), w, 3)
                rolled = [np.roll(band, shift) for band in udwt(x, w, 3)]
                for a, b in zip(direct, rolled):
                    worst_shift = max(worst_shift, float(np.abs(a - b).max()))
    print(f"  worst UDWT shift-covariance gap {worst_shift:.2e}")
    _verdict("wavelets: UDWT shift covariance < 1e-10", worst_shift < 1e-10)


def test_dtw_suite():
    gen = np.random.default_rng(11)
    ok_props = True
    for _ in range(200):
        n = int(gen.integers(2, 12))
        m = int(gen.integers(max(2, n - 3), n + 4))
        x = gen.normal(size=n)
        y = gen.normal(size=m)
        ok_props = ok_props and dtw(x, x).distance == 0.0
        ok_props = ok_props and abs(dtw(x, y).distance - dtw(y, x).distance) < 1e-12
        radius = abs(n - m) + int(gen.integers(0, 3))
        banded = dtw(x, y, window=radius).distance
        ok_props = ok_props and banded >= dtw(x, y).distance - 1e-12
    _verdict("dtw: identity, symmetry, band monotonicity on 200 pairs", ok_props)

    ok_exact = True
    for _ in range(60):
        n = int(gen.integers(2, 9))
        m = int(gen.integers(2, 9))
        x = gen.normal(size=n)
        y = gen.normal(size=m)
        ok_exact = ok_exact and abs(
            dtw(x, y).distance - dtw_brute_force(x, y)
        ) < 1e-10
    _verdict("dtw: equals exhaustive path enumeration (n,m <= 8)", ok_exact)


def test_clustering_suite():
    gen = np.random.default_rng(13)
    methods = ("single", "complete", "average", "ward")
    worst_height = 0.0
    worst_multiset = 0.0
    structure_ok = True
    for trial in range(500):
        n = 3 + int(47 * gen.random() ** 2)  # skew small, includes n up to 50
        x = gen.normal(size=(n, int(gen.integers(1, 4))))
        method = methods[trial % 4]
        d = pdist(x, squared=method == "ward")
        ours = linkage(d, method)
        ref = naive_linkage(d, n, method)
        for (a1, b1, h1, s1), (a2, b2, h2, s2) in zip(ours.merges, ref):
            structure_ok = structure_ok and (a1, b1, s1) == (a2, b2, s2)
            worst_height = max(worst_height, abs(h1 - h2))
        chain = linkage_memory_saving(x, method)
        gap = float(
            np.abs(np.sort(ours.heights()) - np.sort(chain.heights())).max()
        )
        worst_multiset = max(worst_multiset, gap)
    print(
        f"  500 instances: worst oracle height gap {worst_height:.2e}, "
        f"worst multiset gap {worst_multiset:.2e}"
    )
    _verdict("clustering: linkage equals naive oracle on 500 instances", structure_ok and worst_height < 1e-9)
    _verdict("clustering: memory-saving heights match within 1e-9", worst_multiset < 1e-9)

    monotone = True
    for seed in range(50):
        x = np.random.default_rng(seed).normal(size=(60, 2)) * (1 + seed % 5)
        r = kmeans(x, 5, seed=seed)
        monotone = monotone and bool(np.all(np.diff(np.asarray(r.inertia_history)) <= 1e-9))
    _verdict("clustering: k-means inertia non-increasing every iteration", monotone)


def test_stability_suite():
    identical = [[4, 2, 0, 1, 3]] * 5
    _verdict("stability: identical lists give 0", canberra_stability(identical) == 0.0)

    gen = make_rng(314159, "permutation")
    lists = [gen.permutation(30) for _ in range(200)]
    value = canberra_stability(lists)
    print(f"  canberra on 200 random permutations = {value:.4f}")
    _verdict("stability: random permutations normalize to 1.0 +- 0.05", abs(value - 1.0) <= 0.05)


def test_workflow_hygiene():
    gen = np.random.default_rng(17)
    n, p = 60, 12
    x = gen.normal(size=(n, p))
    y = gen.permutation(np.array([0] * (n // 2) + [1] * (n // 2)))  # labels carry no signal
    d = classification_dataset(x, y)
    cfg = WorkflowConfig(
        task="classify",
        estimator="knn",
        seed=1234,
        params={"k": "3"},
        resampling={"scheme": "stratified", "folds": "5"},
        ranking={"method": "golub", "keep": "3"},
    )
    report = run_workflow(cfg, dataset=d)
    majority_baseline = 0.5
    print(f"  shuffled-label CV error = {report.mean_error:.4f} (baseline 0.5)")
    _verdict(
        "workflow: rank-inside-CV on shuffled labels stays near baseline (+-0.1)",
        abs(report.mean_error - majority_baseline) <= 0.1,
    )
    again = run_workflow(cfg, dataset=d)
    _verdict(
        "workflow: reports byte-identical under fixed config+seed",
        render_records(report).encode() == render_records(again).encode(),
    )
