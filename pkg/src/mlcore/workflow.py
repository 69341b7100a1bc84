"""Resampled estimation workflows: split -> (rank -> reduce ->) train -> test.

A workflow is described by a flat INI-style config (sections: workflow, data,
estimator, resampling, ranking, reduction, output) and runs deterministically
from its seed: identical config + seed gives byte-identical reports. Feature
ranking, when configured, is refit inside each training fold only; test-fold
rows never reach the ranker.
"""

import configparser
from dataclasses import dataclass, field

import numpy as np

from . import io as mio
from .core import (
    ConfusionMatrix,
    classification_dataset,
    confusion,
    error_rate,
    kfold,
    monte_carlo_split,
    regression_dataset,
)
from .decomposition import (
    kpca_learn_data,
    kpca_transform_data,
    pca_learn,
    pca_transform,
)
from .discriminant import (
    discriminant_predict,
    dlda_fit,
    fda_fit,
    fda_predict,
    golub_fit,
    kfda_fit_data,
    kfda_predict_data,
    lda_fit,
    max_likelihood_fit,
    srda_fit,
)
from .errors import InvalidParameter, MlcoreError
from .feature_selection import canberra_stability, irelief, kfda_rfe, rfe
from .kernels import KernelSpec
from .linear import (
    dual_predict_data,
    elastic_net_fit,
    kernel_ridge_fit_data,
    linear_predict,
    logistic_fit,
    ols_fit,
    perceptron_fit,
    pls_fit,
    pls_predict,
    ridge_fit,
)
from .nonparametric import (
    knn_fit,
    knn_predict,
    parzen_fit_data,
    parzen_predict_data,
    tree_fit,
    tree_predict,
)
from .svm import linear_weights, svc_train, svm_predict, svr_train


def kernel_from_params(params):
    gamma = params.get("gamma")
    return KernelSpec(
        params.get("kernel", "linear"),
        None if gamma in (None, "", "auto") else float(gamma),
        int(params.get("degree", 3)),
        float(params.get("coef0", 0.0)),
    )


def _opt_float(value):
    return None if value in (None, "", "auto") else float(value)


def _classify_via_regression(fit):
    """Adapt a regression fit to classification on +-1 encoded labels."""

    def wrapped(d, params, seed):
        y_pm = np.where(d.y == d.classes[0], -1.0, 1.0)
        if d.classes.size != 2:
            raise InvalidParameter("regression-backed classification is binary only")
        model = fit(regression_dataset(d.x, y_pm), params, seed)
        return ("signed", model, d.classes)

    return wrapped


def _predict_signed(predict):
    def wrapped(m, x):
        tag, model, classes = m
        values = predict(model, x)
        return np.where(values >= 0, classes[1], classes[0])

    return wrapped


# estimator name -> (task, fit(d, params, seed) -> model, predict(model, x))
ESTIMATORS = {
    "svc": (
        "classify",
        lambda d, p, s: svc_train(
            d, kernel_from_params(p), c=float(p.get("c", 1.0)), tol=float(p.get("tol", 1e-3))
        ),
        svm_predict,
    ),
    "svr": (
        "regress",
        lambda d, p, s: svr_train(
            d,
            kernel_from_params(p),
            c=float(p.get("c", 1.0)),
            epsilon=float(p.get("epsilon", 0.1)),
            tol=float(p.get("tol", 1e-3)),
        ),
        svm_predict,
    ),
    "ols": ("regress", lambda d, p, s: ols_fit(d), lambda m, x: linear_predict(m, x)),
    "ridge": (
        "regress",
        lambda d, p, s: ridge_fit(d, float(p.get("lam", 1.0))),
        lambda m, x: linear_predict(m, x),
    ),
    "kernel_ridge": (
        "regress",
        lambda d, p, s: kernel_ridge_fit_data(d, kernel_from_params(p), float(p.get("lam", 1.0))),
        dual_predict_data,
    ),
    "elastic_net": (
        "regress",
        lambda d, p, s: elastic_net_fit(
            d,
            float(p.get("lam1", 0.1)),
            float(p.get("lam2", 0.1)),
            float(p.get("tol", 1e-6)),
            int(p.get("max_iter", 10_000)),
        ),
        lambda m, x: linear_predict(m, x),
    ),
    "pls": (
        "regress",
        lambda d, p, s: pls_fit(d, int(p.get("components", 2))),
        pls_predict,
    ),
    "logistic": (
        "classify",
        lambda d, p, s: logistic_fit(
            d, float(p.get("lam", 0.0)), float(p.get("tol", 1e-6)), int(p.get("max_iter", 10_000))
        ),
        lambda m, x: linear_predict(m, x, "classification"),
    ),
    "perceptron": (
        "classify",
        lambda d, p, s: perceptron_fit(d, float(p.get("alpha", 0.1)), int(p.get("epochs", 100))),
        lambda m, x: linear_predict(m, x, "classification"),
    ),
    "lda": (
        "classify",
        lambda d, p, s: lda_fit(d, _opt_float(p.get("reg"))),
        discriminant_predict,
    ),
    "dlda": (
        "classify",
        lambda d, p, s: dlda_fit(d, _opt_float(p.get("reg"))),
        discriminant_predict,
    ),
    "max_likelihood": (
        "classify",
        lambda d, p, s: max_likelihood_fit(d, _opt_float(p.get("reg"))),
        discriminant_predict,
    ),
    "golub": ("classify", lambda d, p, s: golub_fit(d), lambda m, x: linear_predict(m, x, "classification")),
    "fda": (
        "classify",
        lambda d, p, s: fda_fit(d, _opt_float(p.get("reg"))),
        fda_predict,
    ),
    "kfda": (
        "classify",
        lambda d, p, s: kfda_fit_data(d, kernel_from_params(p), float(p.get("reg", 1e-3))),
        kfda_predict_data,
    ),
    "parzen": (
        "classify",
        lambda d, p, s: parzen_fit_data(d, kernel_from_params(p)),
        parzen_predict_data,
    ),
    "knn": ("classify", lambda d, p, s: knn_fit(d, int(p.get("k", 1))), knn_predict),
    "tree": (
        "classify",
        lambda d, p, s: tree_fit(
            d,
            int(p.get("min_leaf", 1)),
            None if p.get("max_depth") in (None, "", "none") else int(p["max_depth"]),
        ),
        tree_predict,
    ),
}

ESTIMATORS["elastic_net_classifier"] = (
    "classify",
    _classify_via_regression(ESTIMATORS["elastic_net"][1]),
    _predict_signed(lambda m, x: linear_predict(m, x)),
)


def _svc_linear_trainer(params):
    c = float(params.get("c", 1.0))
    tol = float(params.get("tol", 1e-3))

    def trainer(x, y):
        return linear_weights(svc_train(classification_dataset(x, y), KernelSpec("linear"), c, tol))

    return trainer


def _rank_rfe(d, params, seed):
    trainer_name = params.get("trainer", "svc")
    if trainer_name == "svc":
        trainer = _svc_linear_trainer(params)
    elif trainer_name == "golub":
        trainer = lambda x, y: golub_fit(classification_dataset(x, y))
    elif trainer_name == "fda":
        trainer = lambda x, y: fda_fit(classification_dataset(x, y))
    else:
        raise InvalidParameter(f"unknown RFE trainer {trainer_name!r}")
    return rfe(trainer, d, int(params.get("step", 1))).order


def _rank_golub(d, params, seed):
    model = golub_fit(d)
    w2 = np.asarray(model.weights) ** 2
    return np.asarray(
        sorted(range(d.p), key=lambda j: (-w2[j], j)), dtype=np.int64
    )


def _rank_irelief(d, params, seed):
    result = irelief(
        d,
        float(params.get("sigma", 1.0)),
        int(params.get("max_iter", 1000)),
        float(params.get("tol", 1e-6)),
    )
    w = result.weights
    return np.asarray(sorted(range(d.p), key=lambda j: (-w[j], j)), dtype=np.int64)


def _rank_kfda_rfe(d, params, seed):
    return kfda_rfe(
        d,
        float(params.get("reg", 1e-3)),
        int(params.get("step", 1)),
        kernel_from_params(params),
    ).order


# ranking method name -> callable(d, params, seed) -> order array
RANKERS = {
    "rfe": _rank_rfe,
    "golub": _rank_golub,
    "irelief": _rank_irelief,
    "kfda_rfe": _rank_kfda_rfe,
}


@dataclass(frozen=True)
class WorkflowConfig:
    task: str
    estimator: str
    seed: int
    params: dict = field(default_factory=dict)
    resampling: dict = field(default_factory=lambda: {"scheme": "none"})
    ranking: dict | None = None
    reduction: dict | None = None
    data: dict | None = None


@dataclass(frozen=True)
class WorkflowReport:
    config: WorkflowConfig
    replicate_errors: tuple
    mean_error: float
    stdev_error: float
    confusion_total: object | None
    rankings: tuple
    stability: float | None
    failures: tuple

    @property
    def ok(self):
        return not self.failures


def parse_config(path):
    """Read a flat INI workflow config into a WorkflowConfig."""
    cp = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        cp.read_file(fh)
    wf = cp["workflow"]
    task = wf.get("task", "classify")
    estimator = wf.get("estimator")
    if estimator is None and cp.has_section("estimator"):
        estimator = cp["estimator"].get("name")
    if estimator is None:
        raise InvalidParameter("config missing estimator name")
    if "seed" not in wf:
        raise InvalidParameter("config missing mandatory seed")
    params = {}
    if cp.has_section("estimator"):
        params = {k: v for k, v in cp["estimator"].items() if k != "name"}
    resampling = {"scheme": "none"}
    if cp.has_section("resampling"):
        resampling = dict(cp["resampling"].items())
    ranking = dict(cp["ranking"].items()) if cp.has_section("ranking") else None
    reduction = dict(cp["reduction"].items()) if cp.has_section("reduction") else None
    data = dict(cp["data"].items()) if cp.has_section("data") else None
    return WorkflowConfig(
        task=task,
        estimator=estimator,
        seed=int(wf["seed"]),
        params=params,
        resampling=resampling,
        ranking=ranking,
        reduction=reduction,
        data=data,
    )


def _load_dataset(cfg):
    data = cfg.data or {}
    if "path" not in data:
        raise InvalidParameter("config has no [data] path and no dataset was passed")
    return mio.parse_csv(
        data["path"],
        label_col=data.get("label_column", "last"),
        delimiter=data.get("delimiter", ","),
        header=str(data.get("header", "false")).lower() in ("1", "true", "yes"),
        task="classify" if cfg.task == "classify" else "regress",
    )


def _splits(cfg, d):
    scheme = cfg.resampling.get("scheme", "none")
    if scheme == "none":
        idx = np.arange(d.n)
        return [(idx, idx)]
    if scheme in ("kfold", "stratified"):
        k = int(cfg.resampling.get("folds", 5))
        strat = d.y if scheme == "stratified" else None
        return list(kfold(d.n, k, cfg.seed, stratify_on=strat).splits())
    if scheme == "montecarlo":
        return monte_carlo_split(
            d.n,
            float(cfg.resampling.get("train_fraction", 0.7)),
            int(cfg.resampling.get("replicates", 10)),
            cfg.seed,
        )
    raise InvalidParameter(f"unknown resampling scheme {scheme!r}")


def _subset(d, idx, cols=None):
    x = d.x[idx]
    if cols is not None:
        x = x[:, cols]
    y = d.y[idx]
    if d.classes is not None:
        return classification_dataset(x, y)
    return regression_dataset(x, y)


def _reduce(cfg, d_train, x_train, x_test, seed):
    method = cfg.reduction.get("method", "pca")
    k = int(cfg.reduction.get("k", 2))
    if method == "pca":
        m = pca_learn(x_train)
        return pca_transform(m, x_train, k), pca_transform(m, x_test, k)
    if method == "kpca":
        m = kpca_learn_data(x_train, kernel_from_params(cfg.reduction))
        return kpca_transform_data(m, x_train, k), kpca_transform_data(m, x_test, k)
    if method == "srda":
        m = srda_fit(d_train, float(cfg.reduction.get("alpha", 0.0)))
        return m.transform(x_train)[:, :k], m.transform(x_test)[:, :k]
    raise InvalidParameter(f"unknown reduction method {method!r}")


def run_workflow(cfg, dataset=None):
    """Execute the configured resampled pipeline; deterministic in (cfg, seed).

    Ranking and reduction are refit inside each training fold; per-replicate
    estimator failures are recorded rather than raised.
    """
    if cfg.estimator not in ESTIMATORS:
        raise InvalidParameter(f"unknown estimator {cfg.estimator!r}")
    est_task, fit, predict = ESTIMATORS[cfg.estimator]
    if cfg.task not in ("classify", "regress"):
        raise InvalidParameter(f"unknown task {cfg.task!r}")
    if cfg.task != est_task:
        raise InvalidParameter(
            f"estimator {cfg.estimator!r} is a {est_task} method, config says {cfg.task}"
        )
    d = _load_dataset(cfg) if dataset is None else dataset

    errors = []
    rankings = []
    failures = []
    conf_total = None
    for rep, (train_idx, test_idx) in enumerate(_splits(cfg, d)):
        try:
            d_train = _subset(d, train_idx)
            cols = None
            if cfg.ranking is not None:
                method = cfg.ranking.get("method", "rfe")
                if method not in RANKERS:
                    raise InvalidParameter(f"unknown ranking method {method!r}")
                order = RANKERS[method](d_train, cfg.ranking, cfg.seed)
                rankings.append(np.asarray(order, dtype=np.int64))
                keep = int(cfg.ranking.get("keep", d.p))
                cols = np.sort(np.asarray(order[:keep], dtype=np.int64))
                d_train = _subset(d, train_idx, cols)
            x_train = d_train.x
            x_test = d.x[test_idx][:, cols] if cols is not None else d.x[test_idx]
            if cfg.reduction is not None:
                x_train, x_test = _reduce(cfg, d_train, x_train, x_test, cfg.seed)
                d_train = (
                    classification_dataset(x_train, d_train.y)
                    if cfg.task == "classify"
                    else regression_dataset(x_train, d_train.y)
                )
            model = fit(d_train, cfg.params, cfg.seed)
            pred = predict(model, x_test)
            y_test = d.y[test_idx]
            if cfg.task == "classify":
                errors.append(error_rate(y_test, pred))
                c = confusion(y_test, pred, d.classes)
                conf_total = (
                    c
                    if conf_total is None
                    else ConfusionMatrix(c.classes, conf_total.counts + c.counts)
                )
            else:
                errors.append(float(np.mean((y_test - pred) ** 2)))
        except MlcoreError as e:
            failures.append((rep, f"{type(e).__name__}: {e}"))
        except np.linalg.LinAlgError as e:
            failures.append((rep, f"LinAlgError: {e}"))

    stability = None
    if len(rankings) >= 2:
        keep = int(cfg.ranking.get("keep", d.p)) if cfg.ranking else None
        top_k = keep if keep is not None and keep < d.p else None
        stability = canberra_stability(rankings, top_k=top_k, p=d.p)
    mean_err = float(np.mean(errors)) if errors else float("nan")
    stdev_err = float(np.std(errors, ddof=1)) if len(errors) > 1 else 0.0
    return WorkflowReport(
        cfg,
        tuple(errors),
        mean_err,
        stdev_err,
        conf_total,
        tuple(tuple(r.tolist()) for r in rankings),
        stability,
        tuple(failures),
    )


def fmt_machine(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def fmt_human(v):
    if isinstance(v, float):
        return "%.4g" % v
    return str(v)


def render_records(report):
    """Machine-readable key=value lines; byte-identical across repeated runs."""
    lines = []
    cfg = report.config
    lines.append(f"workflow.task={cfg.task}")
    lines.append(f"workflow.estimator={cfg.estimator}")
    lines.append(f"workflow.seed={cfg.seed}")
    for key in sorted(cfg.params):
        lines.append(f"workflow.param.{key}={cfg.params[key]}")
    lines.append(f"resampling.scheme={cfg.resampling.get('scheme', 'none')}")
    lines.append(f"replicates={len(report.replicate_errors)}")
    for i, e in enumerate(report.replicate_errors):
        lines.append(f"replicate.{i}.error={fmt_machine(e)}")
    for i, r in enumerate(report.rankings):
        lines.append(f"replicate.{i}.ranking={','.join(str(v) for v in r)}")
    lines.append(f"error.mean={fmt_machine(report.mean_error)}")
    lines.append(f"error.stdev={fmt_machine(report.stdev_error)}")
    if report.confusion_total is not None:
        c = report.confusion_total
        for i, ci in enumerate(c.classes):
            for j, cj in enumerate(c.classes):
                lines.append(f"confusion.{ci}.{cj}={c.counts[i, j]}")
    if report.stability is not None:
        lines.append(f"stability.canberra={fmt_machine(report.stability)}")
        lines.append("stability.normalization=exact-expectation")
    lines.append(f"failures.count={len(report.failures)}")
    for rep, msg in report.failures:
        lines.append(f"failure.{rep}={msg}")
    return "\n".join(lines) + "\n"


def render_human(report):
    cfg = report.config
    out = [
        f"task {cfg.task} | estimator {cfg.estimator} | seed {cfg.seed}",
        f"replicates: {len(report.replicate_errors)}"
        f" ({cfg.resampling.get('scheme', 'none')})",
        f"mean error: {fmt_human(report.mean_error)}"
        f" (stdev {fmt_human(report.stdev_error)})",
    ]
    if report.stability is not None:
        out.append(f"ranking stability (canberra): {fmt_human(report.stability)}")
    if report.failures:
        out.append(f"FAILURES: {len(report.failures)}")
        out.extend(f"  replicate {rep}: {msg}" for rep, msg in report.failures)
    return "\n".join(out) + "\n"
