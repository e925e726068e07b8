import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interesting_subgraphs import _pykernels, kernels
from interesting_subgraphs.errors import GraphError
from interesting_subgraphs.metrics import (average_neighbor_degree, compute_metrics, core_number,
                                           edge_betweenness, eigenvector_centrality,
                                           load_stopwords, node_betweenness, subgraph_centrality,
                                           subgraph_centrality_series, vocabulary_diversity)
from oracles import (brute_betweenness, dense_adjacency, graph_from_edges, peel_core_numbers,
                     random_connected_graph, series_subgraph_centrality)

K2 = [(0, 1)]
K3 = [(0, 1), (1, 2), (0, 2)]
PATH3 = [(0, 1), (1, 2)]
STAR3 = [(0, 1), (0, 2), (0, 3)]


def g(n, edges):
    return graph_from_edges(n, edges)


def test_eigenvector_examples():
    ev = eigenvector_centrality(g(3, K3))
    assert all(v == pytest.approx(1 / math.sqrt(3), abs=1e-9) for v in ev.values())
    assert eigenvector_centrality(g(1, [])) == {"v0": 1.0}
    ev = eigenvector_centrality(g(3, PATH3))
    assert ev["v1"] == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert ev["v0"] == pytest.approx(0.5, abs=1e-9) and ev["v2"] == pytest.approx(0.5, abs=1e-9)


def test_eigenvector_matches_dense_solver():
    rng = random.Random(5)
    for _ in range(30):
        h = random_connected_graph(rng, 12)
        if len(h.nodes) < 2:
            continue
        ids, A = dense_adjacency(h)
        w, V = np.linalg.eigh(A)
        ref = np.abs(V[:, -1])
        ev = eigenvector_centrality(h)
        assert np.allclose([ev[i] for i in ids], ref, atol=1e-7)


def test_eigenvector_bipartite_large_falls_back_cleanly():
    # complete bipartite K_{40,40}: power iteration oscillates slowly
    edges = [(a, 40 + b) for a in range(40) for b in range(40)]
    ev = eigenvector_centrality(g(80, edges))
    assert np.allclose(list(ev.values()), 1 / math.sqrt(80), atol=1e-9)


def test_eigenvector_rejects_disconnected():
    with pytest.raises(GraphError):
        eigenvector_centrality(g(3, [(0, 1)]))


def test_edge_betweenness_examples():
    assert edge_betweenness(g(2, K2)) == {("v0", "v1"): 1.0}
    assert edge_betweenness(g(3, PATH3)) == {("v0", "v1"): 2.0, ("v1", "v2"): 2.0}
    assert set(edge_betweenness(g(3, K3)).values()) == {1.0}


def test_node_betweenness_examples():
    assert set(node_betweenness(g(3, K3)).values()) == {0.0}
    assert node_betweenness(g(3, PATH3)) == {"v0": 0.0, "v1": 1.0, "v2": 0.0}
    nb = node_betweenness(g(4, STAR3))
    assert nb["v0"] == 3.0 and nb["v1"] == nb["v2"] == nb["v3"] == 0.0


def test_betweenness_examples_match_oracle():
    for n, edges in [(2, K2), (3, PATH3), (3, K3), (4, STAR3)]:
        node, edge = brute_betweenness(g(n, edges))
        assert node_betweenness(g(n, edges)) == {k: float(v) for k, v in node.items()}
        assert edge_betweenness(g(n, edges)) == {k: float(v) for k, v in edge.items()}


def test_betweenness_rejects_disconnected():
    with pytest.raises(GraphError):
        node_betweenness(g(2, []))


def test_subgraph_centrality_examples():
    assert subgraph_centrality(g(1, [])) == {"v0": pytest.approx(1.0)}
    assert all(v == pytest.approx(math.cosh(1), abs=1e-12)
               for v in subgraph_centrality(g(2, K2)).values())
    k3 = (math.e ** 2 + 2 / math.e) / 3
    assert k3 == pytest.approx(2.70827, abs=1e-5)
    assert all(v == pytest.approx(k3, abs=1e-12) for v in subgraph_centrality(g(3, K3)).values())
    oracle = series_subgraph_centrality(g(3, K3))
    assert all(v == pytest.approx(k3, abs=1e-12) for v in oracle.values())


def test_subgraph_centrality_series_path_agrees():
    rng = random.Random(3)
    h = random_connected_graph(rng, 8)
    dense = subgraph_centrality(h)
    series = subgraph_centrality_series(h)
    assert all(abs(dense[k] - series[k]) < 1e-6 for k in dense)


def test_average_neighbor_degree_examples():
    assert set(average_neighbor_degree(g(3, K3)).values()) == {2.0}
    z = average_neighbor_degree(g(4, STAR3))
    assert z == {"v0": 1.0, "v1": 3.0, "v2": 3.0, "v3": 3.0}
    assert average_neighbor_degree(g(3, PATH3)) == {"v0": 2.0, "v1": 1.0, "v2": 2.0}
    assert average_neighbor_degree(g(2, [])) == {"v0": 0.0, "v1": 0.0}


def test_core_number_examples():
    assert set(core_number(g(3, K3)).values()) == {2}
    assert set(core_number(g(5, [(0, 1), (1, 2), (2, 3), (3, 4)])).values()) == {1}
    k4 = [(a, b) for a in range(4) for b in range(a + 1, 4)] + [(3, 4)]
    assert core_number(g(5, k4)) == {"v0": 3, "v1": 3, "v2": 3, "v3": 3, "v4": 1}


def test_core_number_isolated_and_empty():
    assert core_number(g(2, [])) == {"v0": 0, "v1": 0}
    assert core_number(g(0, [])) == {}


def test_vocabulary_diversity_examples():
    assert vocabulary_diversity(["alpha beta", "gamma delta"]) == 1.0
    assert vocabulary_diversity(["alpha alpha alpha alpha"]) == 0.25
    assert vocabulary_diversity([]) == 0.0
    assert vocabulary_diversity(["the and of", "a"]) == 0.0


def test_vocabulary_diversity_tokenization():
    # non-alphanumeric boundaries, case folding, stopwords and 1-char tokens dropped
    assert vocabulary_diversity(["Alpha,ALPHA;alpha x the"]) == pytest.approx(1 / 3)


def test_stopword_list_size_and_override(tmp_path):
    words = load_stopwords()
    assert 150 <= len(words) <= 200 and "the" in words
    p = tmp_path / "sw.txt"
    p.write_text("alpha\n")
    assert vocabulary_diversity(["alpha beta beta"], load_stopwords(p)) == 0.5


def test_compute_metrics_k3():
    from interesting_subgraphs.candidates import CandidateSubgraph
    c = CandidateSubgraph("c", g(3, K3), {}, "G1", [])
    b = compute_metrics(c)
    assert all(v == pytest.approx(1 / math.sqrt(3)) for v in b.ev.values())
    assert set(b.nc.values()) == {0.0}
    assert set(b.mu.values()) == {2}
    assert b.diversity == 0.0
    assert set(b.ec) == {("v0", "v1"), ("v0", "v2"), ("v1", "v2")}


def test_compute_metrics_k2_and_disconnected():
    b = compute_metrics(g(2, K2))
    assert all(v == pytest.approx(math.cosh(1)) for v in b.sc.values())
    with pytest.raises(GraphError):
        compute_metrics(g(3, K2))


def test_kernel_backends_agree():
    rng = random.Random(11)
    for _ in range(40):
        h = random_connected_graph(rng, 25)
        proj = h.projection()
        n1, s1 = _pykernels.brandes(proj.indptr, proj.indices)
        n2, s2 = kernels.brandes(proj.indptr, proj.indices)
        assert np.allclose(n1, n2) and np.allclose(s1, s2)
        assert np.array_equal(_pykernels.core_number(proj.indptr, proj.indices),
                              kernels.core_number(proj.indptr, proj.indices))


def test_compiled_backend_is_loaded():
    # the editable install builds the extension; the fallback is exercised above
    assert kernels.BACKEND in ("cython", "python")


graphs = st.integers(0, 2**32 - 1).map(lambda s: random_connected_graph(random.Random(s), 8))


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_metric_invariants(h):
    ids, A = dense_adjacency(h)
    deg = A.sum(axis=1)
    assert deg.sum() == 2 * len(h.projection().pairs)
    mu = core_number(h)
    assert all(mu[i] <= d for i, d in zip(ids, deg))
    for k in set(mu.values()):
        members = [i for i, n in enumerate(ids) if mu[n] >= k]
        sub = A[np.ix_(members, members)]
        assert sub.sum(axis=1).min() >= k
    assert mu == peel_core_numbers(h)
    ev = eigenvector_centrality(h)
    x = np.array([ev[i] for i in ids])
    assert np.linalg.norm(x) == pytest.approx(1.0)
    lam = x @ A @ x
    assert np.linalg.norm(A @ x - lam * x) <= 1e-6
    if len(ids) > 1:
        assert lam > 0
    assert all(v >= 0 for v in node_betweenness(h).values())
    assert all(v >= 0 for v in edge_betweenness(h).values())
    assert all(v > 0 for v in subgraph_centrality(h).values())


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 1000))
def test_regular_graph_neighbor_degree(n, shift):
    # cycle C_n is 2-regular
    edges = [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(0, 1)]
    d = 2 if n > 2 else 1
    assert set(average_neighbor_degree(g(n, edges)).values()) == {float(d)}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.text(alphabet="abc xyz", max_size=15), max_size=8), st.randoms())
def test_diversity_bounds_and_permutation(corpus, rnd):
    d = vocabulary_diversity(corpus)
    assert 0.0 <= d <= 1.0
    shuffled = list(corpus)
    rnd.shuffle(shuffled)
    assert vocabulary_diversity(shuffled) == d


def test_bipartite_subgraph_centrality_matches_dense_eigh():
    rng = random.Random(8)
    for _ in range(60):
        a, b = rng.randint(1, 12), rng.randint(1, 15)
        edges = [(i, a + rng.randrange(b)) for i in range(a)]
        edges += [(rng.randrange(a), a + j) for j in range(b)]
        edges += [(rng.randrange(a), a + rng.randrange(b)) for _ in range(rng.randint(0, 20))]
        h = g(a + b, edges)
        ids, A = dense_adjacency(h)
        w, V = np.linalg.eigh(A)
        ref = (V * V) @ np.exp(w)
        sc = subgraph_centrality(h)
        assert np.allclose([sc[i] for i in ids], ref, rtol=1e-12, atol=0)
