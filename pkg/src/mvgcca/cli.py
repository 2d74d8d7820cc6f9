"""Command-line entry point: ``mvgcca <subcommand> ...``.

Every subcommand exits with status 1 and a JSON error object on stderr when
something goes wrong.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import graph as graphs
from . import io
from .bounds import generalization_bound
from .errors import ConfigurationError, MvgccaError
from .kernels import center_kernel, gaussian_kernel, linear_kernel
from .mcca import center_views
from .pipeline import (PipelineConfig, bound_sweep, embed, evaluate_classification,
                       evaluate_clustering, evaluate_ranking, fit_variant,
                       knn_graph_from_views, model_loadings, ranking_runs, stratified_split)
from .synth import SynthSpec, generate


def _floats(text):
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in str(text).split(",") if x.strip()]


def _num(x):
    # shortest text that round-trips to the same float
    return repr(float(x))


def _sigma(text):
    return "auto" if text in (None, "auto") else float(text)


def _epsilon(text):
    vals = _floats(text) if isinstance(text, str) else text
    if isinstance(vals, list) and len(vals) == 1:
        return vals[0]
    return vals


def load_config(args):
    """Defaults < JSON config file < explicit command-line flags."""
    cfg = {}
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
    for key in ("variant", "d", "gamma", "epsilon", "kernel", "sigma", "cd_form", "seed", "delta"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if "epsilon" in cfg:
        cfg["epsilon"] = _epsilon(cfg["epsilon"])
    if "sigma" in cfg:
        cfg["sigma"] = _sigma(cfg["sigma"])
    graph = dict(cfg.get("graph", {}))
    if getattr(args, "graph", None):
        graph = {"file": args.graph}
    if getattr(args, "knn", None):
        graph = {"knn": args.knn}
        if args.knn_views:
            graph["views"] = _ints(args.knn_views)
    cfg["graph"] = graph
    return PipelineConfig.from_dict(cfg).validate()


def resolve_graph(graph_cfg, data):
    if not graph_cfg:
        return None
    if "file" in graph_cfg:
        return io.read_edge_list(graph_cfg["file"], data.n_samples)
    if "knn" in graph_cfg:
        return knn_graph_from_views(data, int(graph_cfg["knn"]), graph_cfg.get("views"))
    raise ConfigurationError(f"graph config needs 'file' or 'knn', got {sorted(graph_cfg)}")


def _labels_for(path, n):
    ids, labels = io.read_labels(path)
    return io.label_vector(ids, labels, n)


def cmd_fit(args):
    cfg = load_config(args)
    data = io.load_dataset(args.data)
    W = resolve_graph(cfg.graph, data)
    model = fit_variant(cfg, data, W)
    io.save_model(args.out, model)
    eig_out = args.eigen_out or str(Path(args.out).with_suffix("")) + "_eigenvalues.csv"
    with open(eig_out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "eigenvalue"])
        for i, lam in enumerate(model.eigenvalues):
            w.writerow([i, _num(lam)])


def _train_data(args):
    return io.load_dataset(args.train_data) if getattr(args, "train_data", None) else None


def cmd_transform(args):
    model = io.load_model(args.model)
    E = embed(model, io.load_dataset(args.data).views, _train_data(args))
    io.write_matrix_csv(args.out, E.T)


def _embedding(args, model):
    if args.data:
        return embed(model, io.load_dataset(args.data).views, _train_data(args))
    return model.S_hat


def cmd_evaluate(args):
    model = io.load_model(args.model)
    if args.task == "clustering":
        E = _embedding(args, model)
        truth = _labels_for(args.labels, E.shape[1])
        out = evaluate_clustering(E, truth, args.k, args.seed)
    elif args.task == "classification":
        if not (args.test_data and args.test_labels):
            raise ConfigurationError("classification needs --test-data and --test-labels")
        train = _train_data(args)
        E_train = embed(model, train.views, train) if train is not None else model.S_hat
        E_test = embed(model, io.load_dataset(args.test_data).views, train)
        out = evaluate_classification(E_train, _labels_for(args.labels, E_train.shape[1]),
                                      E_test, _labels_for(args.test_labels, E_test.shape[1]), args.j)
    else:
        E = _embedding(args, model)
        ids, labels = io.read_labels(args.labels)
        groups = {}
        for i, lab in zip(ids.tolist(), labels.tolist()):
            groups.setdefault(lab, []).append(i)
        if args.L > E.shape[1] - args.n_seeds:
            print(json.dumps({"warning": f"L={args.L} exceeds the candidate count; clamped"}),
                  file=sys.stderr)
        out = evaluate_ranking(E, groups, args.n_seeds, args.L, args.runs, args.seed)
        if args.curve_out:
            with open(args.curve_out, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["L", "precision", "recall", "mrr"])
                for L in range(1, args.L + 1):
                    p, r, m = ranking_runs(E, groups, args.n_seeds, L, args.runs, args.seed)
                    w.writerow([L, _num(p), _num(r), _num(m)])
    out["task"] = args.task
    out["variant"] = model.variant
    io.write_json(args.out, out)


def cmd_bound(args):
    model = io.load_model(args.model)
    data = io.load_dataset(args.data)
    U = model_loadings(model, data)
    rep = generalization_bound(U, center_views(data), args.delta)
    io.write_json(args.out, rep.to_dict())


def cmd_sweep(args):
    cfg = load_config(args)
    data = io.load_dataset(args.data)
    labels = _labels_for(args.labels, data.n_samples)
    gammas = _floats(args.gammas)
    rows = {g: [] for g in range(len(gammas))}
    rng = np.random.default_rng(cfg.seed)
    knn = "knn" in cfg.graph
    W_full = None if knn else resolve_graph(cfg.graph, data)
    for run in range(args.runs):
        tr, te = stratified_split(labels, args.train_frac, rng)
        train, test = data.subset(tr), data.subset(te)
        # a k-NN graph is rebuilt from the training views only
        W = resolve_graph(cfg.graph, train) if knn else W_full
        if W is not None and not knn:
            W = graphs.restrict(W, tr)
        L = None if W is None else graphs.laplacian(W)
        res = bound_sweep(train, test, labels[te], L, gammas, int(cfg.d), args.k,
                          cfg.seed + run, cfg.delta)
        for i, r in enumerate(res):
            rows[i].append(r)
    cols = ["gamma", "bound", "g_bar", "B", "R", "accuracy"]
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(cols)
        for i in range(len(gammas)):
            mean = {c: float(np.mean([r[c] for r in rows[i]])) for c in cols}
            w.writerow([_num(mean[c]) for c in cols])
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_graph_build(args):
    if args.method == "knn":
        data = io.load_dataset(args.data)
        views = _ints(args.views) if args.views else None
        W = knn_graph_from_views(data, args.k1, views, _sigma(args.sigma))
    elif args.method == "supervised":
        O = io.read_matrix_csv(args.data[0]).T
        labels = _labels_for(args.labels, O.shape[1])
        W = graphs.supervised_cosine_graph(O, labels, args.k2)
    else:
        if not args.graphs or not args.n:
            raise ConfigurationError("combine needs --graphs and --n")
        Ws = [io.read_edge_list(p, args.n) for p in args.graphs]
        weights = _floats(args.weights) if args.weights else None
        W = graphs.combine_adjacency(Ws, weights)
    io.write_edge_list(args.out, W)


def cmd_kernel(args):
    X = io.read_matrix_csv(args.data).T
    K = linear_kernel(X) if args.kernel == "linear" else gaussian_kernel(X, _sigma(args.sigma))
    if args.center:
        K = center_kernel(K)
    io.write_matrix_csv(args.out, K.K)


def cmd_synth(args):
    dims = tuple(_ints(args.view_dims))
    spec = SynthSpec(n_samples=args.n_samples, n_views=len(dims), source_dim=args.source_dim,
                     view_dims=dims, noise_std=args.noise_std, n_clusters=args.n_clusters,
                     separation=args.separation, nuisance_dim=args.nuisance_dim,
                     nuisance_std=args.nuisance_std, seed=args.seed)
    sd = generate(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.save_dataset([out / f"view{m}.csv" for m in range(sd.data.n_views)], sd.data)
    io.write_labels(out / "labels.csv", sd.labels)
    io.write_edge_list(out / "graph.tsv", sd.W)
    io.write_matrix_csv(out / "sources.csv", sd.sources.T)


def _add_model_opts(p, sweep=False):
    p.add_argument("--config", help="JSON config; flags override its keys")
    if not sweep:
        p.add_argument("--variant", choices=["mcca", "gmcca", "gdmcca", "gkmcca", "pca"])
    p.add_argument("--d", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--epsilon", help="scalar or comma-separated per-view values")
    p.add_argument("--kernel", choices=["linear", "gaussian"])
    p.add_argument("--sigma", help="Gaussian bandwidth or 'auto'")
    p.add_argument("--cd-form", dest="cd_form", choices=["derived", "printed"])
    p.add_argument("--seed", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--graph", help="TSV edge list of the sample graph")
    p.add_argument("--knn", type=int, help="build a k-NN Gaussian graph from the views")
    p.add_argument("--knn-views", help="comma-separated view indices for --knn")


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as JSON on stderr, like runtime errors."""

    def error(self, message):
        print(json.dumps({"error": "UsageError", "message": message, "command": self.prog}),
              file=sys.stderr)
        self.exit(2)


def build_parser():
    ap = _Parser(prog="mvgcca", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a model and write its JSON + eigenvalue table")
    p.add_argument("--data", nargs="+", required=True, help="one CSV per view (rows = samples)")
    _add_model_opts(p)
    p.add_argument("--out", required=True)
    p.add_argument("--eigen-out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("transform", help="embed new samples with a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", nargs="+", required=True)
    p.add_argument("--train-data", nargs="+", help="training views (dual/kernel models)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("evaluate", help="clustering, ranking or classification metrics")
    p.add_argument("--model", required=True)
    p.add_argument("--task", choices=["clustering", "ranking", "classification"], required=True)
    p.add_argument("--labels", required=True, help="CSV id,label (training/embedded samples)")
    p.add_argument("--data", nargs="+", help="views to embed (default: the model's S_hat)")
    p.add_argument("--train-data", nargs="+")
    p.add_argument("--test-data", nargs="+")
    p.add_argument("--test-labels")
    p.add_argument("--k", type=int, help="number of clusters (default: number of labels)")
    p.add_argument("--j", type=int, default=1, help="neighbors for classification")
    p.add_argument("--L", type=int, default=35, help="ranking cutoff")
    p.add_argument("--n-seeds", type=int, default=5, help="exemplars per ranking query")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--curve-out", help="CSV of metrics for L = 1..L")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bound", help="generalization-bound report for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", nargs="+", required=True, help="training views")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="bound and test clustering accuracy versus gamma")
    p.add_argument("--data", nargs="+", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--gammas", default="0,0.01,0.1,1,10")
    p.add_argument("--train-frac", type=float, default=0.5)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--k", type=int)
    _add_model_opts(p, sweep=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("graph", help="graph utilities")
    gsub = p.add_subparsers(dest="graph_command", required=True)
    g = gsub.add_parser("build", help="build a sample graph as a TSV edge list")
    g.add_argument("--method", choices=["knn", "supervised", "combine"], required=True)
    g.add_argument("--data", nargs="+", help="view CSVs (knn) or one feature CSV (supervised)")
    g.add_argument("--labels", help="labels CSV (supervised)")
    g.add_argument("--k1", type=int, default=10)
    g.add_argument("--k2", type=int, default=1)
    g.add_argument("--sigma", default="auto")
    g.add_argument("--views", help="comma-separated view indices (knn)")
    g.add_argument("--graphs", nargs="+", help="edge lists to combine")
    g.add_argument("--weights", help="comma-separated combination weights")
    g.add_argument("--n", type=int, help="number of nodes (combine)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_graph_build)

    p = sub.add_parser("kernel", help="export a kernel matrix as headerless CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--kernel", choices=["linear", "gaussian"], default="gaussian")
    p.add_argument("--sigma", default="auto")
    p.add_argument("--center", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("synth", help="write a synthetic dataset with a planted graph")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-samples", type=int, default=200)
    p.add_argument("--view-dims", default="10,10,10")
    p.add_argument("--source-dim", type=int, default=2)
    p.add_argument("--n-clusters", type=int, default=3)
    p.add_argument("--noise-std", type=float, default=1.0)
    p.add_argument("--separation", type=float, default=2.0)
    p.add_argument("--nuisance-dim", type=int, default=0)
    p.add_argument("--nuisance-std", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (MvgccaError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        kind = getattr(exc, "kind", type(exc).__name__)
        print(json.dumps({"error": kind, "message": str(exc), "command": args.command}),
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
