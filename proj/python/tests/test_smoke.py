import math

import pytest

import graphboot as gb


def test_graph_roundtrip_and_errors():
    g = gb.Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert g.node_count == 4 and g.edge_count == 3
    assert g.has_edge(2, 1) and not g.has_edge(0, 3)
    assert gb.Graph.from_text(g.to_text()) == g
    with pytest.raises(gb.GraphFormatError, match="self-loop"):
        gb.Graph.from_text("n 3\n0 1\n1 1\n")


def test_motif_counts():
    tri = gb.Motif("K3")
    assert tri.vertex_count == 3 and tri.edge_count == 3
    assert gb.labeled_copy_count(gb.Motif("3; 0-1,1-2")) == 3
    assert [len(gb.isomorphism_classes(p)) for p in (2, 3, 4)] == [2, 4, 11]
    k4 = gb.Graph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    assert gb.count_induced_copies(k4, tri) == 4
    assert gb.motif_density(k4, tri) == 1.0


def test_sampling_is_seeded():
    g1, latent = gb.sample_graph("additive", 0.3, 60, seed=5)
    g2, _ = gb.sample_graph("additive", 0.3, 60, seed=5)
    assert g1 == g2 and len(latent) == 60
    assert gb.true_motif_probability("constant", 0.4, gb.Motif("K2")) == pytest.approx(0.4)


def test_variance_closed_form():
    rho, n = 0.5, 100
    got = gb.variance_sigma2("constant", rho, gb.Motif("K2"), n)
    assert got == pytest.approx(2 * (1 - rho) / ((n - 1) * rho), rel=1e-12)


def test_histogram_fit():
    g, _ = gb.sample_graph("constant", 0.3, 48, seed=2)
    r = gb.select_bin_count(48, g.edge_density())
    fit = gb.fit_histogram(g, r, seed=1)
    assert fit["bin_count"] == r
    assert len(fit["assignment"]) == 48
    assert len(fit["block_probs"]) == r * r


def test_bootstrap_is_deterministic():
    g, _ = gb.sample_graph("constant", 0.3, 50, seed=3)
    a = gb.bootstrap(g, ["K2", "K3"], replicates=100, seed=9)
    b = gb.bootstrap(g, ["K2", "K3"], replicates=100, seed=9, threads=3)
    assert a == b
    assert a["replicates"] == 100


def test_experiment_and_config_errors():
    rows, report = gb.run_experiment("[experiment]\nkind = oracle\n")
    worst = [r for r in rows if r["metric"] == "max_second_moment_rel_error"][0]
    assert worst["value"] <= 1e-10
    assert report["experiment"] == "oracle"
    with pytest.raises(gb.ConfigError, match="experiment.kind"):
        gb.run_experiment("[experiment]\nkind = nope\n")
    text = gb.canonical_config("[experiment]\nkind = oracle\n")
    assert gb.canonical_config(text) == text
    assert not math.isnan(worst["value"])
