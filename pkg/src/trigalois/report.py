"""Figure rendering for run directories: decay curves, per-prime root
statistics, and experiment summaries, written as PNG files next to the CSVs."""

from __future__ import annotations

import glob
import json
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .cli import parse_records


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
    return path


def render_decay(csv_path: str, out_path: str) -> str:
    rows = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    rows = np.atleast_2d(rows)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(rows[:, 0], rows[:, 1], lw=1.2)
    ax.set_xlabel("step n")
    ax.set_ylabel("l1 distance to uniform")
    ax.set_title(os.path.basename(csv_path).removesuffix(".csv"))
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, out_path)


def render_records(csv_path: str, out_path: str) -> str:
    with open(csv_path, encoding="utf-8") as fh:
        records = parse_records(fh.read())
    ps = np.array([r.p for r in records])
    rs = np.array([r.r_all for r in records])
    logs = np.array([r.logp for r in records])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    values, counts = np.unique(rs, return_counts=True)
    ax1.bar(values, counts, color="#33679b")
    ax1.set_xlabel("distinct roots mod p")
    ax1.set_ylabel("primes")
    ax1.set_title("root-count histogram")
    if ps.size:
        order = np.argsort(ps)
        # x is not stored in the CSV; the smallest prime - 1 is a close stand-in
        x0 = ps.min() - 1
        running = np.cumsum(logs[order] * rs[order]) / x0
        ax2.plot(ps[order], running, lw=1.0)
        ax2.axhline(running[-1], color="gray", lw=0.8, ls="--")
        ax2.set_xlabel("prime p")
        ax2.set_ylabel("running weighted estimate")
        ax2.set_title(f"final estimate {running[-1]:.3f}")
    fig.suptitle(os.path.basename(csv_path).removesuffix(".csv"))
    return _save(fig, out_path)


def render_experiment(json_path: str, out_path: str) -> str:
    with open(json_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    fig, ax = plt.subplots(figsize=(6, 4))
    if "per_sample" in doc and doc["per_sample"] and "a_k" in doc["per_sample"][0]:
        ks = sorted(doc["per_sample"][0]["a_k"])
        data = [[row["a_k"][k] for row in doc["per_sample"]] for k in ks]
        targets = None
        if "targets" in doc:
            targets = [float(doc["targets"][k]) for k in ks]
        elif "target" in doc:
            targets = [float(doc["target"])] * len(ks)
        ax.boxplot(data, tick_labels=[f"k={k}" for k in ks])
        if targets:
            for i, t in enumerate(targets):
                ax.hlines(t, i + 0.75, i + 1.25, color="red", lw=1.2)
        ax.set_ylabel("per-sample estimate")
        ax.set_title(doc.get("experiment", "experiment"))
    elif "verdict_histogram" in doc:
        hist = doc["verdict_histogram"]
        ax.bar(range(len(hist)), list(hist.values()), color="#33679b")
        ax.set_xticks(range(len(hist)), list(hist.keys()), rotation=20)
        ax.set_ylabel("samples")
        ax.set_title("certification verdicts")
    else:
        ax.axis("off")
        ax.text(0.5, 0.5, "no plottable payload", ha="center")
    return _save(fig, out_path)


def render_run(run_dir: str, out_dir: str) -> list[str]:
    """Render every recognized artifact in a run directory to PNG files."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for csv_path in sorted(glob.glob(os.path.join(run_dir, "decay_*.csv"))):
        name = os.path.basename(csv_path).removesuffix(".csv") + ".png"
        written.append(render_decay(csv_path, os.path.join(out_dir, name)))
    for csv_path in sorted(glob.glob(os.path.join(run_dir, "records_*.csv"))):
        name = os.path.basename(csv_path).removesuffix(".csv") + ".png"
        written.append(render_records(csv_path, os.path.join(out_dir, name)))
    for json_path in sorted(glob.glob(os.path.join(run_dir, "*.json"))):
        if os.path.basename(json_path) == "manifest.json":
            continue
        with open(json_path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError:
                continue
        if any(key in doc for key in ("per_sample", "verdict_histogram")):
            name = os.path.basename(json_path).removesuffix(".json") + ".png"
            written.append(render_experiment(json_path, os.path.join(out_dir, name)))
    return written
