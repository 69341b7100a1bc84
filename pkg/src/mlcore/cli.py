"""Workflow command-line tool.

Subcommands: fit, predict, cv, rank, stability, transform, cluster, dwt, dtw.
Common flags --seed, --config and --output are accepted by every subcommand.
Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

Machine-readable output is line-oriented ``key=value`` with floats printed to
17 significant digits; human summaries round to 4.
"""

import argparse
import sys

import numpy as np

from . import clustering, io as mio, timeseries, workflow
from .core import error_rate
from .decomposition import (
    kpca_learn_data,
    kpca_transform_data,
    pca_learn,
    pca_transform,
)
from .discriminant import (
    DiscriminantDirection,
    GaussianClassModel,
    discriminant_predict,
    fda_predict,
    kfda_predict_data,
    srda_fit,
)
from .errors import (
    FormatError,
    InvalidCoefficients,
    InvalidData,
    InvalidFoldCount,
    InvalidLabels,
    InvalidLength,
    InvalidLists,
    InvalidParameter,
    InvalidSplit,
    InvalidWindow,
    MlcoreError,
    NotConverged,
    ParseError,
    ShapeMismatch,
    SingularCovariance,
    TrainerError,
    UnsupportedKernel,
)
from .feature_selection import canberra_stability
from .linear import DualModel, LinearModel, PlsModel, dual_predict_data, linear_predict, pls_predict
from .nonparametric import KnnModel, ParzenModel, TreeNode, knn_predict, parzen_predict_data, tree_predict
from .svm import SvmModel, svm_predict
from .workflow import ESTIMATORS, WorkflowConfig, fmt_machine

USAGE_ERRORS = (InvalidParameter, InvalidFoldCount, InvalidSplit, UnsupportedKernel)
DATA_ERRORS = (
    ParseError,
    InvalidData,
    ShapeMismatch,
    InvalidLabels,
    InvalidLists,
    InvalidLength,
    InvalidCoefficients,
    InvalidWindow,
    FormatError,
    FileNotFoundError,
    IsADirectoryError,
)
NUMERICAL_ERRORS = (NotConverged, SingularCovariance, TrainerError, np.linalg.LinAlgError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _common(sub):
    sub.add_argument(
        "--seed", type=int, default=None,
        help="64-bit seed for anything random (default 0; overrides the config seed)",
    )
    sub.add_argument("--config", help="INI workflow config file")
    sub.add_argument("--output", help="output file (or prefix for cv reports)")


def _seed(args):
    return 0 if args.seed is None else args.seed


def _data_flags(sub):
    sub.add_argument("--data", required=True, help="CSV input path")
    sub.add_argument("--header", action="store_true", help="skip a header row")
    sub.add_argument("--label-col", default="last", help='label column: index, "last" or "none"')
    sub.add_argument("--delimiter", default=",")


def _parse_params(items):
    params = {}
    for item in items or []:
        if "=" not in item:
            raise InvalidParameter(f"--param needs key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def build_parser():
    parser = _Parser(prog="mlcore", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("fit", help="train an estimator and save the model")
    _common(p)
    _data_flags(p)
    p.add_argument("--estimator", required=True, choices=sorted(ESTIMATORS))
    p.add_argument("--task", choices=("classify", "regress"))
    p.add_argument("--param", action="append", metavar="KEY=VALUE")

    p = subs.add_parser("predict", help="apply a saved model to data")
    _common(p)
    _data_flags(p)
    p.add_argument("--model", required=True)

    p = subs.add_parser("cv", help="run a resampled workflow from a config file")
    _common(p)

    p = subs.add_parser("rank", help="rank features on the full dataset")
    _common(p)
    _data_flags(p)
    p.add_argument("--method", required=True, choices=sorted(workflow.RANKERS))
    p.add_argument("--param", action="append", metavar="KEY=VALUE")

    p = subs.add_parser("stability", help="Canberra stability of ranked lists")
    _common(p)
    p.add_argument("--lists", required=True, help="CSV: one ranked list per line")
    p.add_argument("--top-k", type=int)

    p = subs.add_parser("transform", help="fit a reduction and emit scores")
    _common(p)
    _data_flags(p)
    p.add_argument("--method", default="pca", choices=("pca", "kpca", "srda"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")

    p = subs.add_parser("cluster", help="k-means or hierarchical clustering")
    _common(p)
    _data_flags(p)
    p.add_argument("--method", default="kmeans", choices=("kmeans", "linkage", "linkage_memory"))
    p.add_argument("--k", type=int, help="cluster count (kmeans; optional cut for linkage)")
    p.add_argument("--linkage", default="average", choices=clustering.METHODS)

    p = subs.add_parser("dwt", help="discrete wavelet transform of a 1-column CSV")
    _common(p)
    _data_flags(p)
    p.add_argument("--wavelet", default="haar", choices=("haar", "d4"))
    p.add_argument("--levels", type=int, default=1)

    p = subs.add_parser("dtw", help="dynamic time warping between two 1-column CSVs")
    _common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--window", type=int)
    return parser


def _emit(lines, output):
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_labeled(args, task="classify"):
    return mio.parse_csv(
        args.data,
        label_col=args.label_col,
        delimiter=args.delimiter,
        header=args.header,
        task=task,
    )


def _load_matrix(args):
    return mio.parse_matrix(args.data, delimiter=args.delimiter, header=args.header)


def _predict_any(model, x):
    if isinstance(model, SvmModel):
        return svm_predict(model, x)
    if isinstance(model, LinearModel):
        task = "classification" if model.classes is not None else "regression"
        return linear_predict(model, x, task)
    if isinstance(model, DualModel):
        return dual_predict_data(model, x)
    if isinstance(model, PlsModel):
        return pls_predict(model, x)
    if isinstance(model, GaussianClassModel):
        return discriminant_predict(model, x)
    if isinstance(model, DiscriminantDirection):
        return kfda_predict_data(model, x) if model.dual else fda_predict(model, x)
    if isinstance(model, KnnModel):
        return knn_predict(model, x)
    if isinstance(model, ParzenModel):
        return parzen_predict_data(model, x)
    if isinstance(model, TreeNode):
        return tree_predict(model, x)
    raise InvalidParameter(f"model of kind {type(model).__name__} cannot predict")


def _format_predictions(pred):
    if np.issubdtype(np.asarray(pred).dtype, np.integer):
        return [str(int(v)) for v in pred]
    return [fmt_machine(float(v)) for v in pred]


def cmd_fit(args):
    params = _parse_params(args.param)
    est_task, fit, _ = ESTIMATORS[args.estimator]
    task = args.task or est_task
    if task != est_task:
        raise InvalidParameter(f"{args.estimator} supports task {est_task!r} only")
    d = _load_labeled(args, task)
    model = fit(d, params, _seed(args))
    if args.output is None:
        raise InvalidParameter("fit requires --output for the model file")
    mio.save_model(model, args.output)
    sys.stdout.write(f"model.kind={type(model).__name__}\nmodel.path={args.output}\n")
    return 0


def _model_task(model):
    if isinstance(model, SvmModel):
        return "classify" if model.task == "svc" else "regress"
    if isinstance(model, LinearModel):
        return "classify" if model.classes is not None else "regress"
    if isinstance(model, (DualModel, PlsModel)):
        return "regress"
    return "classify"


def cmd_predict(args):
    model = mio.load_model(args.model)
    task = _model_task(model)
    if args.label_col == "none":
        x, y = _load_matrix(args), None
    else:
        d = _load_labeled(args, task)
        x, y = d.x, d.y
    pred = _predict_any(model, x)
    lines = [f"prediction.{i}={v}" for i, v in enumerate(_format_predictions(pred))]
    if y is not None and task == "classify":
        lines.append(f"error={fmt_machine(error_rate(y, pred))}")
    _emit(lines, args.output)
    return 0


def cmd_cv(args):
    if not args.config:
        raise InvalidParameter("cv requires --config")
    cfg = workflow.parse_config(args.config)
    if args.seed is not None:
        cfg = WorkflowConfig(
            cfg.task, cfg.estimator, args.seed, cfg.params, cfg.resampling,
            cfg.ranking, cfg.reduction, cfg.data,
        )
    report = workflow.run_workflow(cfg)
    sys.stdout.write(workflow.render_human(report))
    if args.output:
        with open(args.output + ".kv", "w", encoding="utf-8") as fh:
            fh.write(workflow.render_records(report))
        with open(args.output + ".txt", "w", encoding="utf-8") as fh:
            fh.write(workflow.render_human(report))
    else:
        sys.stdout.write(workflow.render_records(report))
    return 0 if report.ok else 3


def cmd_rank(args):
    d = _load_labeled(args)
    params = _parse_params(args.param)
    order = workflow.RANKERS[args.method](d, params, _seed(args))
    _emit([f"ranking={','.join(str(int(v)) for v in order)}"], args.output)
    return 0


def cmd_stability(args):
    rows = []
    with open(args.lists, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([int(v) for v in line.split(",")])
    value = canberra_stability(rows, top_k=args.top_k)
    _emit(
        [
            f"stability.canberra={fmt_machine(value)}",
            "stability.normalization=exact-expectation",
        ],
        args.output,
    )
    return 0


def cmd_transform(args):
    params = _parse_params(args.param)
    if args.method == "srda":
        d = _load_labeled(args)
        m = srda_fit(d, float(params.get("alpha", 0.0)))
        scores = m.transform(d.x)[:, : args.k]
    else:
        x = _load_matrix(args) if args.label_col == "none" else _load_labeled(args).x
        if args.method == "pca":
            m = pca_learn(x)
            scores = pca_transform(m, x, args.k)
        else:
            m = kpca_learn_data(x, workflow.kernel_from_params(params))
            scores = kpca_transform_data(m, x, args.k)
    lines = [",".join(fmt_machine(float(v)) for v in row) for row in scores]
    _emit(lines, args.output)
    return 0


def cmd_cluster(args):
    x = _load_matrix(args) if args.label_col == "none" else _load_labeled(args).x
    lines = []
    if args.method == "kmeans":
        if not args.k:
            raise InvalidParameter("kmeans needs --k")
        result = clustering.kmeans(x, args.k, _seed(args))
        lines.append(f"inertia={fmt_machine(result.inertia)}")
        lines.append(f"iterations={result.iterations}")
        lines.extend(
            f"assignment.{i}={int(a)}" for i, a in enumerate(result.assignments)
        )
    else:
        if args.method == "linkage":
            den = clustering.linkage(
                clustering.pdist(x, squared=args.linkage == "ward"), args.linkage
            )
        else:
            den = clustering.linkage_memory_saving(x, args.linkage)
        for t, (a, b, h, size) in enumerate(den.merges):
            lines.append(f"merge.{t}={a},{b},{fmt_machine(float(h))},{size}")
        if args.k:
            lines.extend(
                f"assignment.{i}={int(a)}"
                for i, a in enumerate(clustering.cut(den, args.k))
            )
    _emit(lines, args.output)
    return 0


def cmd_dwt(args):
    x = _load_matrix(args).ravel()
    w = timeseries.wavelet_filter(args.wavelet)
    c = timeseries.dwt(x, w, args.levels)
    lines = [f"levels={c.levels}", f"length={c.length}"]
    for lv, det in enumerate(c.details, start=1):
        lines.append(f"detail.{lv}={','.join(fmt_machine(float(v)) for v in det)}")
    lines.append(
        f"approximation={','.join(fmt_machine(float(v)) for v in c.approximation)}"
    )
    _emit(lines, args.output)
    return 0


def cmd_dtw(args):
    x = mio.parse_matrix(args.x).ravel()
    y = mio.parse_matrix(args.y).ravel()
    r = timeseries.dtw(x, y, window=args.window)
    _emit(
        [
            f"distance={fmt_machine(r.distance)}",
            "path=" + ";".join(f"{i},{j}" for i, j in r.path),
        ],
        args.output,
    )
    return 0


_COMMANDS = {
    "fit": cmd_fit,
    "predict": cmd_predict,
    "cv": cmd_cv,
    "rank": cmd_rank,
    "stability": cmd_stability,
    "transform": cmd_transform,
    "cluster": cmd_cluster,
    "dwt": cmd_dwt,
    "dtw": cmd_dtw,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except USAGE_ERRORS as e:
        sys.stderr.write(f"usage error: {e}\n")
        return 1
    except DATA_ERRORS as e:
        sys.stderr.write(f"data error: {e}\n")
        return 2
    except NUMERICAL_ERRORS as e:
        sys.stderr.write(f"numerical failure: {e}\n")
        return 3
    except MlcoreError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
