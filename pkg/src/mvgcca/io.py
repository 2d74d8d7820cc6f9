"""File formats: sample-major CSV views, label CSVs, TSV edge lists,
kernel CSVs and the JSON model envelope."""

import csv
import json
from pathlib import Path

import numpy as np

from .dual import DualModel
from .errors import DimensionError, InputError
from .mcca import MultiviewDataset, PrimalModel

FLOAT_FMT = "%.17g"


def read_matrix_csv(path):
    """Headerless numeric CSV -> (rows, cols) array with precise error locations."""
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        for r, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            vals = []
            for c, cell in enumerate(row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise InputError(f"{path}: row {r}, column {c}: non-numeric cell {cell!r}") from None
            if rows and len(vals) != len(rows[0]):
                raise InputError(f"{path}: row {r} has {len(vals)} columns, expected {len(rows[0])}")
            rows.append(vals)
    if not rows:
        raise InputError(f"{path}: empty file")
    A = np.array(rows, dtype=float)
    if not np.all(np.isfinite(A)):
        r, c = np.argwhere(~np.isfinite(A))[0]
        raise InputError(f"{path}: row {r}, column {c}: non-finite value")
    return A


def write_matrix_csv(path, A):
    np.savetxt(path, np.atleast_2d(A), delimiter=",", fmt=FLOAT_FMT)


def load_dataset(paths):
    """One CSV per view, rows = samples; returns views as (D_m, N) columns."""
    views = []
    for p in paths:
        views.append(read_matrix_csv(p).T)
    if not views:
        raise InputError("no view files given")
    n = views[0].shape[1]
    for p, X in zip(paths, views):
        if X.shape[1] != n:
            raise DimensionError(f"{p}: {X.shape[1]} samples, {paths[0]} has {n}")
    return MultiviewDataset(tuple(views))


def save_dataset(paths, data):
    for p, X in zip(paths, data.views):
        write_matrix_csv(p, X.T)


def _label_value(s):
    try:
        return int(s)
    except ValueError:
        return s


def read_labels(path):
    """Rows of ``id,label``; a leading header row is skipped. Returns (ids, labels)."""
    ids, labels = [], []
    with Path(path).open(newline="") as fh:
        for r, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < 2:
                raise InputError(f"{path}: row {r} needs 'id,label'")
            try:
                ids.append(int(row[0]))
            except ValueError:
                if r == 0:
                    continue
                raise InputError(f"{path}: row {r}: sample id {row[0]!r} is not an integer") from None
            labels.append(_label_value(row[1].strip()))
    return np.array(ids, dtype=int), np.array(labels)


def label_vector(ids, labels, n):
    """Per-sample label array; every sample 0..n-1 must appear exactly once."""
    if np.any((ids < 0) | (ids >= n)):
        raise InputError(f"label ids must lie in [0, {n})")
    if len(ids) != n or len(np.unique(ids)) != n:
        raise InputError(f"need exactly one label per sample for {n} samples")
    out = np.empty(n, dtype=labels.dtype)
    out[ids] = labels
    return out


def write_labels(path, labels, ids=None):
    labels = np.asarray(labels)
    ids = np.arange(labels.size) if ids is None else ids
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        for i, lab in zip(ids, labels):
            w.writerow([int(i), lab])


def write_edge_list(path, W):
    W = np.asarray(W, dtype=float)
    i, j = np.nonzero(np.triu(W, k=1))
    with Path(path).open("w") as fh:
        for a, b in zip(i, j):
            fh.write(f"{a}\t{b}\t{FLOAT_FMT % W[a, b]}\n")


def read_edge_list(path, n):
    """TSV ``i<TAB>j<TAB>weight`` (0-based, undirected) -> symmetric (n, n) array."""
    W = np.zeros((n, n))
    with Path(path).open() as fh:
        for r, line in enumerate(fh):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 3:
                raise InputError(f"{path}: line {r}: expected i, j, weight")
            try:
                a, b, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise InputError(f"{path}: line {r}: malformed edge {line!r}") from None
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"{path}: line {r}: node index out of range for N={n}")
            if a == b:
                continue
            if w < 0 or not np.isfinite(w):
                raise InputError(f"{path}: line {r}: edge weight must be finite and >= 0")
            W[a, b] = W[b, a] = w
    return W


def _arr(x):
    return np.asarray(x, dtype=float).tolist()


def model_to_dict(model):
    out = {
        "variant": model.variant,
        "gamma": model.gamma,
        "d": model.d,
        "eigenvalues": _arr(model.eigenvalues),
        "S_hat": _arr(model.S_hat),
        "data_hashes": list(model.data_hashes),
    }
    if isinstance(model, PrimalModel):
        out["loadings"] = [_arr(U) for U in model.U]
        out["train_dims"] = [int(np.asarray(U).shape[0]) for U in model.U]
    elif isinstance(model, DualModel):
        out["duals"] = [_arr(A) for A in model.A]
        out["epsilon"] = _arr(model.epsilon)
        out["cd_form"] = model.cd_form
        out["train_dims"] = [int(x) for x in model.train_dims]
        if model.kernels is not None:
            out["kernel"] = [{**k, "centered": True} for k in model.kernels]
    else:
        raise InputError(f"cannot serialize {type(model).__name__}")
    return out


def model_from_dict(obj):
    variant = obj["variant"]
    common = dict(
        S_hat=np.array(obj["S_hat"], dtype=float),
        eigenvalues=np.array(obj["eigenvalues"], dtype=float),
        gamma=float(obj["gamma"]),
        d=int(obj["d"]),
        variant=variant,
        data_hashes=list(obj.get("data_hashes", [])),
    )
    if "loadings" in obj:
        return PrimalModel(U=[np.array(U, dtype=float) for U in obj["loadings"]], **common)
    kernels = None
    if "kernel" in obj:
        kernels = [{k: v for k, v in blk.items() if k != "centered"} for blk in obj["kernel"]]
    return DualModel(A=[np.array(A, dtype=float) for A in obj["duals"]],
                     epsilon=np.array(obj["epsilon"], dtype=float),
                     cd_form=obj.get("cd_form", "derived"), kernels=kernels,
                     train_dims=list(obj.get("train_dims", [])), **common)


def save_model(path, model):
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1, sort_keys=True) + "\n")


def load_model(path):
    return model_from_dict(json.loads(Path(path).read_text()))


def write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")
