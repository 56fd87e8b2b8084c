import pytest

import netrecon as nr


def path_graph(n):
    return nr.Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_graph_basics():
    g = nr.Graph.from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)])
    assert g.num_vertices == 3
    assert g.num_edges == 2
    assert g.has_edge(2, 1)
    assert g.degree(1) == 2
    assert g.edges() == [(0, 1), (1, 2)]


def test_worked_example_probability():
    dist = nr.CategoryDistribution.uniform(50)
    assert nr.pr_description(nr.Description(34, 36), dist) == 3 / 50


def test_end_to_end_unique_categories():
    params = nr.LfrParams()
    params.n, params.k_avg, params.k_max = 200, 8, 16
    params.c_min, params.c_max, params.mu, params.seed = 10, 30, 0.2, 3
    g, communities = nr.generate_lfr_like(params)
    assert g.num_vertices == 200
    assert len(communities) == 200
    labels = list(range(1, 201))
    sample = nr.draw_sample(g, labels, 200, nr.PathMethod.random, respondents=10, seed=5)
    tn, underlying = nr.true_network(sample)
    rec = nr.reconstruct(sample.forest, nr.CategoryDistribution.uniform(200), tn.num_vertices, seed=9)
    assert rec.graph.num_vertices == tn.num_vertices
    if rec.merges:
        assert nr.coalescing_precision(rec, sample) == 1.0


def test_metrics_and_detection():
    assert nr.spearman([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    a = nr.Partition([0, 0, 1, 1])
    assert nr.nmi(a, nr.Partition([5, 5, 2, 2])) == pytest.approx(1.0)
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    edges += [(i + 5, j + 5) for i, j in edges] + [(4, 5)]
    g = nr.Graph.from_edges(10, edges)
    p = nr.detect_communities(g, seed=2)
    assert p.num_communities == 2
    assert nr.modularity(g, p) > 0.4
    props = nr.vertex_properties(g, p)
    assert props["k_out"][4] == 1


def test_sir_full_transmission_on_path():
    params = nr.SirParams()
    params.beta = 1.0
    assert nr.sir_run(path_graph(30), [], params, seed=4) == 30
    mean, stddev, runs = nr.evaluate_immunization(path_graph(30), [0], params)
    assert runs == params.runs
    assert mean <= 29


def test_errors_are_translated():
    with pytest.raises(nr.Error):
        nr.Graph(3).degree(7)
    with pytest.raises(nr.Error):
        nr.spearman([1.0], [2.0])
