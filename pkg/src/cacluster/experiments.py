"""Streaming runs and the experiment drivers behind ``cacluster experiment``."""

import csv
import dataclasses
import json
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from ._kernels import BACKEND
from .batch import batch_late_fusion
from .core import CacConfig, absorb_view, cac_init, final_labels
from .errors import InvalidInput
from .kernels import KernelSpec
from .metrics import NMI_NORMALIZATION, evaluate
from .partition import view_partition


LAMBDA_GRID = tuple(2.0**e for e in range(-10, 11))
KINDS = ("view-order", "view-number", "lambda-sweep", "runtime", "convergence", "baseline-compare")


@dataclass
class RunRecord:
    config: Dict
    view_order: List[int]
    per_view: List[Dict] = field(default_factory=list)
    objective_traces: List[List[float]] = field(default_factory=list)
    peak_retained_size: int = 0
    final_labels: Optional[List[int]] = None
    nmi_normalization: str = NMI_NORMALIZATION
    backend: str = BACKEND

    def final_metrics(self):
        return self.per_view[-1].get("metrics") if self.per_view else None

    def to_dict(self):
        return dataclasses.asdict(self)

    def write_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)


def config_snapshot(config, spec, dataset):
    snap = dataclasses.asdict(config)
    snap["kernel"] = dataclasses.asdict(spec)
    snap["dataset"] = dataset.name
    snap["n"], snap["m"], snap["k"] = dataset.n, dataset.m, dataset.k
    return snap


def partition_cache(dataset, spec):
    """Memoised per-view partitions for experiments that reuse them across runs."""
    cache = {}

    def get(i):
        if i not in cache:
            cache[i] = view_partition(dataset.views[i], dataset.k, spec)
        return cache[i]

    return get


def run_stream(dataset, config=None, view_order=None, spec=None,
               partition_of: Optional[Callable[[int], np.ndarray]] = None):
    """Absorb the views of ``dataset`` one at a time in ``view_order``.

    Each basic partition is built when its view arrives and released after
    absorption.  Metrics (when ground truth exists) are taken after every
    absorption from :func:`final_labels` of the current consensus.
    """
    config = config or CacConfig()
    spec = spec or KernelSpec()
    order = list(range(dataset.m)) if view_order is None else [int(i) for i in view_order]
    if sorted(order) != list(range(dataset.m)):
        raise InvalidInput(f"view_order must be a permutation of 0..{dataset.m - 1}, got {order}")
    if partition_of is None:
        partition_of = lambda i: view_partition(dataset.views[i], dataset.k, spec)  # noqa: E731

    record = RunRecord(config=config_snapshot(config, spec, dataset), view_order=order)
    state = None
    labels = None
    for t, vid in enumerate(order, start=1):
        t0 = time.perf_counter()
        h = partition_of(vid)
        t1 = time.perf_counter()
        entry = {"t": t, "view_id": vid}
        if state is None:
            state = cac_init(h, dataset.k, config)
            entry.update(n_iter=0, converged=True)
            record.objective_traces.append([])
        else:
            res = absorb_view(state, h, config)
            state = res.state
            ws = res.workspace
            entry.update(n_iter=ws.n_iter, converged=ws.converged, h_tilde_norm=ws.h_tilde_norm)
            record.objective_traces.append(list(ws.objective_trace))
            del res, ws
        t2 = time.perf_counter()
        del h
        entry.update(partition_seconds=t1 - t0, absorb_seconds=t2 - t1,
                     retained_size=state.retained_size())
        record.peak_retained_size = max(record.peak_retained_size, state.retained_size())
        labels = final_labels(state, dataset.k, seed=config.seed, n_init=config.kmeans_restarts)
        if dataset.truth is not None:
            entry["metrics"] = evaluate(labels, dataset.truth)
        record.per_view.append(entry)
    record.final_labels = labels.tolist()
    return record


# ---------------------------------------------------------------------------
# experiment drivers; each returns (records, csv_rows, summary)


def _mean_std(values):
    arr = np.asarray(values, dtype=np.float64)
    return {"mean": float(arr.mean()), "std": float(arr.std())}


def _summarise(rows, keys=("acc", "nmi", "purity")):
    return {key: _mean_std([r[key] for r in rows]) for key in keys if rows and key in rows[0]}


def _final_row(record, **extra):
    row = dict(extra)
    metrics = record.final_metrics()
    if metrics:
        row.update(metrics)
    return row


def _require_truth(dataset, kind):
    if dataset.truth is None:
        raise InvalidInput(f"experiment {kind!r} needs ground-truth labels")


def exp_view_order(dataset, config, replicates, spec):
    _require_truth(dataset, "view-order")
    get = partition_cache(dataset, spec)
    records, rows = [], []
    for r in range(replicates):
        order = list(range(dataset.m)) if r == 0 else np.random.default_rng([config.seed, r]).permutation(dataset.m).tolist()
        rec = run_stream(dataset, config, order, spec, get)
        records.append(rec)
        rows.append(_final_row(rec, replicate=r, order="-".join(map(str, order))))
    summary = _summarise(rows)
    accs = [row["acc"] for row in rows]
    summary["acc_spread"] = float(max(accs) - min(accs))
    return records, rows, summary


def exp_view_number(dataset, config, replicates, spec):
    _require_truth(dataset, "view-number")
    get = partition_cache(dataset, spec)
    records, rows = [], []
    for r in range(replicates):
        cfg = dataclasses.replace(config, seed=config.seed + r)
        rec = run_stream(dataset, cfg, None, spec, get)
        records.append(rec)
        for entry in rec.per_view:
            rows.append({"replicate": r, "t": entry["t"], "view_id": entry["view_id"], **entry["metrics"]})
    summary = {
        "per_t": {
            t: _summarise([row for row in rows if row["t"] == t]) for t in range(1, dataset.m + 1)
        }
    }
    return records, rows, summary


def exp_lambda_sweep(dataset, config, replicates, spec, grid=LAMBDA_GRID):
    _require_truth(dataset, "lambda-sweep")
    get = partition_cache(dataset, spec)
    records, rows = [], []
    summary = {"per_lambda": {}}
    for lam in grid:
        lam_rows = []
        for r in range(replicates):
            cfg = dataclasses.replace(config, lam=lam, seed=config.seed + r)
            rec = run_stream(dataset, cfg, None, spec, get)
            records.append(rec)
            lam_rows.append(_final_row(rec, log2_lambda=int(round(np.log2(lam))), **{"lambda": lam, "replicate": r}))
        rows.extend(lam_rows)
        summary["per_lambda"][repr(lam)] = _summarise(lam_rows)
    return records, rows, summary


def time_absorption(partitions, k, config):
    """Wall-clock seconds spent in ``absorb_view`` over a stream (init excluded)."""
    state = cac_init(partitions[0], k, config)
    total = 0.0
    iters = []
    for h in partitions[1:]:
        t0 = time.perf_counter()
        res = absorb_view(state, h, config)
        total += time.perf_counter() - t0
        state = res.state
        iters.append(res.workspace.n_iter)
    return total, iters


def double_rows(h):
    """``[h; h] / sqrt(2)``: the partition of the dataset with every sample duplicated.

    The CAC inner loop follows the same path on it (same labels per copy,
    same ``B`` and ``W``), so only the per-iteration cost changes.
    """
    return np.vstack([h, h]) / np.sqrt(2.0)


def runtime_scaling(partitions, k, config, trials=5):
    """Median absorb wall-clock at (n, m), (2n, m) and (n, m/2).

    ``partitions`` must hold an even number of views; the "m" configuration
    uses all of them and the "m/2" one the first half.
    """
    m = len(partitions)
    if m < 4 or m % 2:
        raise InvalidInput("runtime scaling needs an even number of views >= 4")
    doubled = [double_rows(h) for h in partitions]
    half = partitions[: m // 2]
    time_absorption(half, k, config)  # warm-up (JIT compilation, caches)
    cols = {"n_m": [], "2n_m": [], "n_halfm": []}
    iters = {}
    for _ in range(trials):
        for key, parts in (("n_m", partitions), ("2n_m", doubled), ("n_halfm", half)):
            sec, it = time_absorption(parts, k, config)
            cols[key].append(sec)
            iters[key] = it
    med = {key: float(np.median(v)) for key, v in cols.items()}
    return {
        "median_seconds": med,
        "trials": cols,
        "n_ratio": med["2n_m"] / med["n_m"],
        "m_ratio": med["n_m"] / med["n_halfm"],
        "iterations": iters,
    }


def exp_runtime(dataset, config, replicates, spec, trials=5):
    get = partition_cache(dataset, spec)
    m = dataset.m - dataset.m % 2
    parts = [get(i) for i in range(m)]
    rows = []
    summary = {"replicates": []}
    for r in range(replicates):
        cfg = dataclasses.replace(config, seed=config.seed + r)
        res = runtime_scaling(parts, dataset.k, cfg, trials=trials)
        summary["replicates"].append(res)
        n = dataset.n
        for key, (nn, mm) in {"n_m": (n, m), "2n_m": (2 * n, m), "n_halfm": (n, m // 2)}.items():
            rows.append({"replicate": r, "n": nn, "m": mm, "k": dataset.k,
                         "median_absorb_seconds": res["median_seconds"][key]})
    summary["n_ratio"] = _mean_std([s["n_ratio"] for s in summary["replicates"]])
    summary["m_ratio"] = _mean_std([s["m_ratio"] for s in summary["replicates"]])
    return [], rows, summary


def exp_convergence(dataset, config, replicates, spec):
    get = partition_cache(dataset, spec)
    records, rows = [], []
    for r in range(replicates):
        cfg = dataclasses.replace(config, seed=config.seed + r)
        rec = run_stream(dataset, cfg, None, spec, get)
        records.append(rec)
        for entry, trace in zip(rec.per_view, rec.objective_traces):
            for i, obj in enumerate(trace, start=1):
                rows.append({"replicate": r, "t": entry["t"], "iteration": i, "objective": obj})
    iters = [e["n_iter"] for rec in records for e in rec.per_view if e["t"] > 1]
    summary = {"max_iterations": max(iters) if iters else 0,
               "all_converged": all(e["converged"] for rec in records for e in rec.per_view)}
    return records, rows, summary


def exp_baseline_compare(dataset, config, replicates, spec):
    _require_truth(dataset, "baseline-compare")
    get = partition_cache(dataset, spec)
    records, rows = [], []
    for r in range(replicates):
        cfg = dataclasses.replace(config, seed=config.seed + r)
        rec = run_stream(dataset, cfg, None, spec, get)
        records.append(rec)
        _, batch_labels = batch_late_fusion([get(i) for i in range(dataset.m)], config=cfg)
        row = {"replicate": r, "method": "cac", **rec.final_metrics()}
        rows.append(row)
        rows.append({"replicate": r, "method": "batch", **evaluate(batch_labels, dataset.truth)})
        for i in range(dataset.m):
            single = final_labels(cac_init(get(i), dataset.k, cfg), dataset.k, seed=cfg.seed,
                                  n_init=cfg.kmeans_restarts)
            rows.append({"replicate": r, "method": f"view{i}", **evaluate(single, dataset.truth)})
    summary = {method: _summarise([row for row in rows if row["method"] == method])
               for method in dict.fromkeys(row["method"] for row in rows)}
    return records, rows, summary


DRIVERS = {
    "view-order": exp_view_order,
    "view-number": exp_view_number,
    "lambda-sweep": exp_lambda_sweep,
    "runtime": exp_runtime,
    "convergence": exp_convergence,
    "baseline-compare": exp_baseline_compare,
}


def _write_csv(path, rows):
    if not rows:
        open(path, "w").close()
        return
    fields = list(dict.fromkeys(key for row in rows for key in row))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def experiment(kind, dataset, config=None, replicates=10, out_dir=None, spec=None):
    """Run one experiment; writes run JSONs, a CSV and ``summary.json`` under ``out_dir``."""
    if kind not in DRIVERS:
        raise InvalidInput(f"unknown experiment {kind!r}; choose from {', '.join(KINDS)}")
    if replicates < 1:
        raise InvalidInput("replicates must be >= 1")
    config = config or CacConfig()
    spec = spec or KernelSpec()
    records, rows, summary = DRIVERS[kind](dataset, config, replicates, spec)
    summary = {"kind": kind, "replicates": replicates, "nmi_normalization": NMI_NORMALIZATION,
               "backend": BACKEND, "config": config_snapshot(config, spec, dataset), **summary}
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        for i, rec in enumerate(records):
            rec.write_json(os.path.join(out_dir, f"run_{kind}_{i:04d}.json"))
        _write_csv(os.path.join(out_dir, f"{kind}.csv"), rows)
        with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=1)
    return records, rows, summary
