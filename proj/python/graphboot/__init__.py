"""Subgraph-density bootstrap for sparse graphon models."""

import csv
import io
import json

from graphboot._core import (
    ConfigError,
    Graph,
    GraphFormatError,
    Motif,
    __version__,
    automorphism_count,
    canonical_config,
    count_induced_copies,
    fit_histogram,
    isomorphism_classes,
    labeled_copy_count,
    load_graph,
    motif_density,
    sample_graph,
    save_graph,
    select_bin_count,
    true_motif_probability,
    variance_sigma2,
)
from graphboot import _core


def bootstrap(graph, motifs, method="empirical", replicates=2000, size=0, levels=(0.9,), seed=0, threads=1):
    motifs = [m if isinstance(m, Motif) else Motif(m) for m in motifs]
    return json.loads(_core.bootstrap_json(graph, motifs, method, replicates, size, list(levels), seed, threads))


def run_experiment(config, threads=0):
    """Run an INI config; returns (metrics rows, report dict)."""
    metrics, report = _core.run_experiment_text(config, threads)
    rows = list(csv.DictReader(io.StringIO(metrics)))
    for row in rows:
        row["n"] = int(row["n"])
        row["value"] = float(row["value"])
    return rows, json.loads(report)


__all__ = [
    "ConfigError",
    "Graph",
    "GraphFormatError",
    "Motif",
    "__version__",
    "automorphism_count",
    "bootstrap",
    "canonical_config",
    "count_induced_copies",
    "fit_histogram",
    "isomorphism_classes",
    "labeled_copy_count",
    "load_graph",
    "motif_density",
    "run_experiment",
    "sample_graph",
    "save_graph",
    "select_bin_count",
    "true_motif_probability",
    "variance_sigma2",
]
