"""CSV ingestion and versioned binary model serialization.

The model format is deliberately dumb: magic bytes, a format version, a
model kind tag, then sorted key/value entries holding little-endian 64-bit
scalars, arrays and UTF-8 strings. Round-trips are bit-exact, so a
deserialized model predicts identically to the original.
"""

import io as _io
import struct

import numpy as np

from . import clustering, decomposition, discriminant, linear, nonparametric, svm
from .core import classification_dataset, regression_dataset
from .errors import FormatError, ParseError
from .kernels import KernelSpec
from .linear import _frozen

MAGIC = b"MLCM"
VERSION = 1

_T_FARRAY, _T_IARRAY, _T_FLOAT, _T_INT, _T_STR, _T_NONE, _T_BOOL = range(7)


# ---------------------------------------------------------------------------
# CSV

def _parse_cell(text, row, col):
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"row {row} column {col}: {text!r} is not numeric") from None


def _read_rows(path, delimiter, header):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n\r") for ln in fh]
    lines = [ln for ln in lines if ln.strip() != ""]
    if header:
        lines = lines[1:]
    if not lines:
        raise ParseError(f"{path}: no data rows")
    width = None
    for i, line in enumerate(lines, start=1 + int(bool(header))):
        cells = line.split(delimiter)
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"row {i} has {len(cells)} cells, expected {width}")
        rows.append([_parse_cell(c.strip(), i, j + 1) for j, c in enumerate(cells)])
    return np.asarray(rows, dtype=np.float64)


def parse_matrix(path, delimiter=",", header=False):
    """Read an unlabeled numeric CSV into a sample matrix."""
    return _read_rows(path, delimiter, header)


def parse_csv(path, label_col="last", delimiter=",", header=False, task="classify"):
    """Read a labeled CSV into a LabeledDataset.

    ``label_col`` is a 0-based column index, "last", or "none" (returns a
    bare matrix). Classification labels must be integers; a fractional label
    raises ParseError naming the cell.
    """
    data = _read_rows(path, delimiter, header)
    if label_col == "none":
        return data
    col = data.shape[1] - 1 if label_col == "last" else int(label_col)
    if not 0 <= col < data.shape[1]:
        raise ParseError(f"label column {col} outside 0..{data.shape[1] - 1}")
    y = data[:, col]
    x = np.delete(data, col, axis=1)
    if task == "classify":
        if np.any(y != np.round(y)):
            bad = int(np.argmax(y != np.round(y)))
            raise ParseError(
                f"row {bad + 1} column {col + 1}: label {float(y[bad])} is not an integer"
            )
        return classification_dataset(x, y.astype(np.int64))
    return regression_dataset(x, y)


# ---------------------------------------------------------------------------
# binary entry stream

def _write_entries(buf, entries):
    buf.write(struct.pack("<I", len(entries)))
    for key in sorted(entries):
        value = entries[key]
        kb = key.encode("utf-8")
        buf.write(struct.pack("<H", len(kb)))
        buf.write(kb)
        if value is None:
            buf.write(struct.pack("<B", _T_NONE))
        elif isinstance(value, bool):
            buf.write(struct.pack("<Bq", _T_BOOL, int(value)))
        elif isinstance(value, (int, np.integer)):
            buf.write(struct.pack("<Bq", _T_INT, int(value)))
        elif isinstance(value, (float, np.floating)):
            buf.write(struct.pack("<Bd", _T_FLOAT, float(value)))
        elif isinstance(value, str):
            sb = value.encode("utf-8")
            buf.write(struct.pack("<BI", _T_STR, len(sb)))
            buf.write(sb)
        else:
            arr = np.ascontiguousarray(value)
            if np.issubdtype(arr.dtype, np.integer):
                code, dtype = _T_IARRAY, "<i8"
            else:
                code, dtype = _T_FARRAY, "<f8"
            arr = arr.astype(dtype)
            buf.write(struct.pack("<BB", code, arr.ndim))
            for dim in arr.shape:
                buf.write(struct.pack("<Q", dim))
            buf.write(arr.tobytes(order="C"))


def _take(buf, n):
    b = buf.read(n)
    if len(b) != n:
        raise FormatError("truncated model stream")
    return b


def _read_entries(buf):
    (count,) = struct.unpack("<I", _take(buf, 4))
    entries = {}
    for _ in range(count):
        (klen,) = struct.unpack("<H", _take(buf, 2))
        key = _take(buf, klen).decode("utf-8")
        (code,) = struct.unpack("<B", _take(buf, 1))
        if code == _T_NONE:
            entries[key] = None
        elif code == _T_BOOL:
            entries[key] = bool(struct.unpack("<q", _take(buf, 8))[0])
        elif code == _T_INT:
            entries[key] = int(struct.unpack("<q", _take(buf, 8))[0])
        elif code == _T_FLOAT:
            entries[key] = float(struct.unpack("<d", _take(buf, 8))[0])
        elif code == _T_STR:
            (slen,) = struct.unpack("<I", _take(buf, 4))
            entries[key] = _take(buf, slen).decode("utf-8")
        elif code in (_T_FARRAY, _T_IARRAY):
            (ndim,) = struct.unpack("<B", _take(buf, 1))
            shape = tuple(struct.unpack("<Q", _take(buf, 8))[0] for _ in range(ndim))
            size = int(np.prod(shape)) if shape else 1
            dtype = "<f8" if code == _T_FARRAY else "<i8"
            raw = _take(buf, 8 * size)
            entries[key] = _frozen(np.frombuffer(raw, dtype=dtype).reshape(shape).copy())
        else:
            raise FormatError(f"unknown entry type {code}")
    return entries


# ---------------------------------------------------------------------------
# per-model packing

def _pack_kernel(entries, prefix, spec):
    if spec is None:
        entries[prefix + "none"] = True
        return
    entries[prefix + "kind"] = spec.kind
    entries[prefix + "gamma"] = spec.gamma
    entries[prefix + "degree"] = int(spec.degree)
    entries[prefix + "coef0"] = float(spec.coef0)


def _unpack_kernel(entries, prefix):
    if entries.get(prefix + "none"):
        return None
    return KernelSpec(
        entries[prefix + "kind"],
        entries[prefix + "gamma"],
        entries[prefix + "degree"],
        entries[prefix + "coef0"],
    )


def _flatten_tree(node, nodes):
    idx = len(nodes)
    nodes.append(None)
    if node.is_leaf:
        nodes[idx] = (-1, 0.0, -1, -1, node.label, node.counts)
        return idx
    left = _flatten_tree(node.left, nodes)
    right = _flatten_tree(node.right, nodes)
    nodes[idx] = (node.feature, node.threshold, left, right, node.label, node.counts)
    return idx


def _rebuild_tree(i, feat, thr, left, right, label, counts):
    if feat[i] < 0:
        return nonparametric.TreeNode(-1, 0.0, None, None, int(label[i]), _frozen(counts[i].copy()))
    return nonparametric.TreeNode(
        int(feat[i]),
        float(thr[i]),
        _rebuild_tree(left[i], feat, thr, left, right, label, counts),
        _rebuild_tree(right[i], feat, thr, left, right, label, counts),
        int(label[i]),
        _frozen(counts[i].copy()),
    )


def _pack_linear(m):
    return {"weights": m.weights, "intercept": m.intercept, "classes": m.classes}


def _unpack_linear(e):
    return linear.LinearModel(e["weights"], e["intercept"], e["classes"])


def _pack_dual(m):
    out = {"dual_coefs": m.dual_coefs, "intercept": m.intercept, "x_train": m.x_train}
    _pack_kernel(out, "kernel.", m.kernel)
    return out


def _unpack_dual(e):
    return linear.DualModel(
        e["dual_coefs"], e["intercept"], e["x_train"], _unpack_kernel(e, "kernel.")
    )


def _pack_pls(m):
    return {
        "n_components": m.n_components,
        "x_weights": m.x_weights,
        "x_loadings": m.x_loadings,
        "y_loadings": m.y_loadings,
        "x_mean": m.x_mean,
        "y_mean": m.y_mean,
    }


def _unpack_pls(e):
    return linear.PlsModel(
        e["n_components"], e["x_weights"], e["x_loadings"], e["y_loadings"],
        e["x_mean"], e["y_mean"],
    )


def _pack_gaussian(m):
    return {
        "gkind": m.kind,
        "classes": m.classes,
        "means": m.means,
        "priors": m.priors,
        "covariance": m.covariance,
    }


def _unpack_gaussian(e):
    return discriminant.GaussianClassModel(
        e["gkind"], e["classes"], e["means"], e["priors"], e["covariance"]
    )


def _pack_direction(m):
    out = {
        "direction": m.direction,
        "threshold": m.threshold,
        "classes": m.classes,
        "dual": m.dual,
        "x_train": m.x_train,
    }
    _pack_kernel(out, "kernel.", m.kernel)
    return out


def _unpack_direction(e):
    return discriminant.DiscriminantDirection(
        e["direction"], e["threshold"], e["classes"], e["dual"],
        e["x_train"], _unpack_kernel(e, "kernel."),
    )


def _pack_srda(m):
    return {"directions": m.directions, "x_mean": m.x_mean, "classes": m.classes}


def _unpack_srda(e):
    return discriminant.SrdaModel(e["directions"], e["x_mean"], e["classes"])


def _pack_svm(m):
    out = {
        "task": m.task,
        "classes": m.classes,
        "x_train": m.x_train,
        "n_train": m.n_train,
        "c": m.c,
        "epsilon": m.epsilon,
        "n_sub": len(m.sub_models),
    }
    _pack_kernel(out, "kernel.", m.kernel)
    for i, s in enumerate(m.sub_models):
        out[f"sub.{i}.class_neg"] = s.class_neg
        out[f"sub.{i}.class_pos"] = s.class_pos
        out[f"sub.{i}.support"] = s.support
        out[f"sub.{i}.coefs"] = s.coefs
        out[f"sub.{i}.rho"] = s.rho
        out[f"sub.{i}.objective"] = s.objective
    return out


def _unpack_svm(e):
    subs = tuple(
        svm.SvmSubModel(
            e[f"sub.{i}.class_neg"],
            e[f"sub.{i}.class_pos"],
            e[f"sub.{i}.support"],
            e[f"sub.{i}.coefs"],
            e[f"sub.{i}.rho"],
            e[f"sub.{i}.objective"],
        )
        for i in range(e["n_sub"])
    )
    return svm.SvmModel(
        e["task"], _unpack_kernel(e, "kernel."), e["classes"], subs,
        e["x_train"], e["n_train"], e["c"], e["epsilon"],
    )


def _pack_knn(m):
    return {"x": m.x, "y": m.y, "classes": m.classes, "k": m.k, "metric": m.metric}


def _unpack_knn(e):
    return nonparametric.KnnModel(e["x"], e["y"], e["classes"], e["k"], e["metric"])


def _pack_parzen(m):
    out = {"y_pm": m.y_pm, "classes": m.classes, "threshold": m.threshold, "x_train": m.x_train}
    _pack_kernel(out, "kernel.", m.kernel)
    return out


def _unpack_parzen(e):
    return nonparametric.ParzenModel(
        e["y_pm"], e["classes"], e["threshold"], e["x_train"], _unpack_kernel(e, "kernel.")
    )


def _pack_tree(t):
    nodes = []
    _flatten_tree(t, nodes)
    return {
        "feature": np.asarray([n[0] for n in nodes], dtype=np.int64),
        "threshold": np.asarray([n[1] for n in nodes]),
        "left": np.asarray([n[2] for n in nodes], dtype=np.int64),
        "right": np.asarray([n[3] for n in nodes], dtype=np.int64),
        "label": np.asarray([n[4] for n in nodes], dtype=np.int64),
        "counts": np.stack([n[5] for n in nodes]),
    }


def _unpack_tree(e):
    return _rebuild_tree(
        0, e["feature"], e["threshold"], e["left"], e["right"], e["label"], e["counts"]
    )


def _pack_pca(m):
    return {"mean": m.mean, "components": m.components, "eigenvalues": m.eigenvalues}


def _unpack_pca(e):
    return decomposition.PcaModel(e["mean"], e["components"], e["eigenvalues"])


def _pack_kpca(m):
    out = {
        "alphas": m.alphas,
        "eigenvalues": m.eigenvalues,
        "row_means": m.row_means,
        "total_mean": m.total_mean,
        "x_train": m.x_train,
    }
    _pack_kernel(out, "kernel.", m.kernel)
    return out


def _unpack_kpca(e):
    return decomposition.KpcaModel(
        e["alphas"], e["eigenvalues"], e["row_means"], e["total_mean"],
        e["x_train"], _unpack_kernel(e, "kernel."),
    )


def _pack_kmeans(m):
    return {
        "centroids": m.centroids,
        "assignments": m.assignments,
        "inertia": m.inertia,
        "iterations": m.iterations,
        "inertia_history": np.asarray(m.inertia_history),
    }


def _unpack_kmeans(e):
    return clustering.KmeansResult(
        e["centroids"], e["assignments"], e["inertia"], e["iterations"],
        tuple(e["inertia_history"].tolist()),
    )


def _pack_dendrogram(m):
    return {"n_leaves": m.n_leaves, "merges": np.asarray([list(r) for r in m.merges])}


def _unpack_dendrogram(e):
    merges = tuple(
        (int(a), int(b), float(h), int(s)) for a, b, h, s in e["merges"]
    )
    return clustering.Dendrogram(e["n_leaves"], merges)


_REGISTRY = {
    "linear": (linear.LinearModel, _pack_linear, _unpack_linear),
    "dual": (linear.DualModel, _pack_dual, _unpack_dual),
    "pls": (linear.PlsModel, _pack_pls, _unpack_pls),
    "gaussian": (discriminant.GaussianClassModel, _pack_gaussian, _unpack_gaussian),
    "direction": (discriminant.DiscriminantDirection, _pack_direction, _unpack_direction),
    "srda": (discriminant.SrdaModel, _pack_srda, _unpack_srda),
    "svm": (svm.SvmModel, _pack_svm, _unpack_svm),
    "knn": (nonparametric.KnnModel, _pack_knn, _unpack_knn),
    "parzen": (nonparametric.ParzenModel, _pack_parzen, _unpack_parzen),
    "tree": (nonparametric.TreeNode, _pack_tree, _unpack_tree),
    "pca": (decomposition.PcaModel, _pack_pca, _unpack_pca),
    "kpca": (decomposition.KpcaModel, _pack_kpca, _unpack_kpca),
    "kmeans": (clustering.KmeansResult, _pack_kmeans, _unpack_kmeans),
    "dendrogram": (clustering.Dendrogram, _pack_dendrogram, _unpack_dendrogram),
}


def serialize_model(model):
    """Serialize any fitted model to a versioned byte string."""
    for kind, (cls, pack, _) in _REGISTRY.items():
        if type(model) is cls:
            buf = _io.BytesIO()
            buf.write(MAGIC)
            buf.write(struct.pack("<H", VERSION))
            kb = kind.encode("ascii")
            buf.write(struct.pack("<B", len(kb)))
            buf.write(kb)
            _write_entries(buf, pack(model))
            return buf.getvalue()
    raise FormatError(f"no serializer for {type(model).__name__}")


def deserialize_model(blob):
    """Inverse of serialize_model; rejects corrupt or unknown streams."""
    buf = _io.BytesIO(blob)
    if _take(buf, 4) != MAGIC:
        raise FormatError("bad magic bytes")
    (version,) = struct.unpack("<H", _take(buf, 2))
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    (klen,) = struct.unpack("<B", _take(buf, 1))
    kind = _take(buf, klen).decode("ascii")
    if kind not in _REGISTRY:
        raise FormatError(f"unknown model kind {kind!r}")
    entries = _read_entries(buf)
    if buf.read(1):
        raise FormatError("trailing bytes after model payload")
    return _REGISTRY[kind][2](entries)


def save_model(model, path):
    with open(path, "wb") as fh:
        fh.write(serialize_model(model))


def load_model(path):
    with open(path, "rb") as fh:
        return deserialize_model(fh.read())
