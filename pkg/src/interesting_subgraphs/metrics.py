"""Per-node and per-edge network metrics plus vocabulary diversity.

All structural metrics run on the undirected simple projection of a
:class:`~interesting_subgraphs.graph.PropertyGraph`; edge metrics are keyed
by the ``(u, v)`` node-id pair of the projected edge.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from . import kernels
from .errors import GraphError
from .graph import TWEET, PropertyGraph, connected_components

logger = logging.getLogger(__name__)

NODE_METRICS = ("ev", "nc", "sc", "z", "mu")
EDGE_METRICS = ("ec",)
METRICS = ("ev", "ec", "nc", "sc", "z", "mu")

DENSE_SC_LIMIT = 2000
SERIES_TERMS = 30

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


@dataclass
class MetricBundle:
    """Metric maps for one graph; ``ec`` is keyed by projected node-id pairs."""

    ev: dict = field(default_factory=dict)
    ec: dict = field(default_factory=dict)
    nc: dict = field(default_factory=dict)
    sc: dict = field(default_factory=dict)
    z: dict = field(default_factory=dict)
    mu: dict = field(default_factory=dict)
    diversity: float = 0.0

    def values(self, metric: str) -> list[float]:
        if metric not in METRICS:
            raise KeyError(metric)
        return [float(v) for v in getattr(self, metric).values()]

    def to_dict(self) -> dict:
        out = {m: dict(getattr(self, m)) for m in NODE_METRICS}
        out["ec"] = {f"{u}~{v}": val for (u, v), val in self.ec.items()}
        out["diversity"] = self.diversity
        return out

    def summary(self) -> dict:
        """Count, mean, median and max per metric (for compact reports)."""
        out = {}
        for m in METRICS:
            vals = np.asarray(self.values(m), dtype=float)
            if vals.size:
                out[m] = {"count": int(vals.size), "mean": float(vals.mean()),
                          "median": float(np.median(vals)), "max": float(vals.max())}
            else:
                out[m] = {"count": 0, "mean": None, "median": None, "max": None}
        out["diversity"] = self.diversity
        return out


def adjacency(g: PropertyGraph) -> sp.csr_matrix:
    proj = g.projection()
    data = np.ones(len(proj.indices), dtype=float)
    return sp.csr_matrix((data, proj.indices, proj.indptr), shape=(proj.n, proj.n))


def _require_connected(g: PropertyGraph, what: str) -> None:
    if len(g.nodes) == 0:
        raise GraphError(f"{what} needs at least one node")
    if len(connected_components(g)) != 1:
        raise GraphError(f"{what} requires a connected graph; pass a single component")


def eigenvector_centrality(g: PropertyGraph, tol: float = 1e-10, max_iter: int = 1000,
                           shift: float = 0.1) -> dict[str, float]:
    """Principal eigenvector of the adjacency matrix with unit Euclidean norm.

    Power iteration on ``A + shift*I`` (the shift breaks the +/- lambda
    oscillation of bipartite graphs). When the iteration has not settled
    after ``max_iter`` steps a Lanczos solve (started from the last iterate,
    so the result stays deterministic) finishes the job. A single node
    gets 1.0.
    """
    _require_connected(g, "eigenvector centrality")
    proj = g.projection()
    if proj.n == 1:
        return {proj.ids[0]: 1.0}
    A = adjacency(g)
    x = np.full(proj.n, 1.0 / math.sqrt(proj.n))
    for _ in range(max_iter):
        y = A @ x + shift * x
        y /= np.linalg.norm(y)
        done = np.linalg.norm(y - x) < tol
        x = y
        if done:
            break
    else:
        logger.debug("power iteration did not settle on %d nodes; using eigsh", proj.n)
        if proj.n <= 3:
            _, vecs = scipy.linalg.eigh(A.toarray(), subset_by_index=[proj.n - 1, proj.n - 1])
        else:
            _, vecs = scipy.sparse.linalg.eigsh(A, k=1, which="LA", v0=x, tol=0)
        x = vecs[:, 0]
        x /= np.linalg.norm(x)
    x = np.abs(x)
    return dict(zip(proj.ids, x.tolist()))


def _betweenness(g: PropertyGraph):
    proj = g.projection()
    node_bc, slot_bc = kernels.brandes(proj.indptr, proj.indices)
    edge_bc = {}
    ptr, idx = proj.indptr, proj.indices
    slot = {}
    for i in range(proj.n):
        for k in range(ptr[i], ptr[i + 1]):
            slot[i, int(idx[k])] = k
    for i, j in proj.pairs:
        edge_bc[proj.ids[i], proj.ids[j]] = float(slot_bc[slot[i, j]] + slot_bc[slot[j, i]])
    return dict(zip(proj.ids, node_bc.tolist())), edge_bc


def edge_betweenness(g: PropertyGraph) -> dict[tuple[str, str], float]:
    """Sum over unordered pairs of the share of shortest paths using each edge."""
    _require_connected(g, "edge betweenness")
    return _betweenness(g)[1]


def node_betweenness(g: PropertyGraph) -> dict[str, float]:
    """Share of shortest paths through each node, endpoints excluded, unordered pairs."""
    _require_connected(g, "node betweenness")
    return _betweenness(g)[0]


def subgraph_centrality(g: PropertyGraph) -> dict[str, float]:
    """Diagonal of exp(A).

    Bipartite graphs (every tweet-centred projection is one) go through the
    singular values of the biadjacency block, which gives the same diagonal
    exactly at a fraction of the cost. Otherwise a dense eigendecomposition
    is used up to ``DENSE_SC_LIMIT`` nodes; beyond that the series is
    truncated after ``SERIES_TERMS`` powers, with per-node error at most
    lambda_max**31 / 31!.
    """
    proj = g.projection()
    if proj.n == 0:
        raise GraphError("subgraph centrality needs at least one node")
    A = adjacency(g)
    side = _two_colouring(proj.indptr, proj.indices)
    if side is not None and min(side.sum(), proj.n - side.sum()) <= DENSE_SC_LIMIT:
        sc = _bipartite_sc_diagonal(A, side)
    elif proj.n <= DENSE_SC_LIMIT:
        w, V = np.linalg.eigh(A.toarray())
        sc = (V * V) @ np.exp(w)
    else:
        sc = _series_diagonal(A, SERIES_TERMS)
    return dict(zip(proj.ids, sc.tolist()))


def _two_colouring(indptr, indices):
    """Boolean side per node if the graph is bipartite, else None."""
    n = len(indptr) - 1
    colour = np.full(n, -1, dtype=np.int8)
    ptr, idx = indptr.tolist(), indices.tolist()
    for root in range(n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            c = colour[v]
            for w in idx[ptr[v]:ptr[v + 1]]:
                if colour[w] < 0:
                    colour[w] = 1 - c
                    stack.append(w)
                elif colour[w] == c:
                    return None
    return colour.astype(bool)


def _cosh_sqrt_ratio(x: np.ndarray) -> np.ndarray:
    """(cosh(sqrt x) - 1) / x, smooth through x = 0."""
    out = np.empty_like(x)
    small = x < 1e-3
    xs = x[small]
    out[small] = 0.5 + xs / 24.0 + xs * xs / 720.0
    xl = x[~small]
    out[~small] = (np.cosh(np.sqrt(xl)) - 1.0) / xl
    return out


def _bipartite_sc_diagonal(A: sp.csr_matrix, side: np.ndarray) -> np.ndarray:
    # With A = [[0, B], [B^T, 0]], exp(A) has diagonal blocks cosh(sqrt(B B^T)) and
    # cosh(sqrt(B^T B)). One eigendecomposition B B^T = U diag(lam) U^T over the smaller
    # side serves both: the far side uses W = B^T U and (cosh sqrt(lam) - 1) / lam.
    rows, cols = np.flatnonzero(~side), np.flatnonzero(side)
    if len(rows) > len(cols):
        rows, cols = cols, rows
    sc = np.ones(A.shape[0])
    if len(rows) == 0 or len(cols) == 0:
        return sc
    B = A[rows][:, cols]
    gram = (B @ B.T).toarray()
    lam, U = np.linalg.eigh(gram)
    lam = np.clip(lam, 0.0, None)
    ratio = _cosh_sqrt_ratio(lam)
    sc[rows] += (U * U) @ (ratio * lam)
    W = np.asarray(B.T @ U)
    sc[cols] += (W * W) @ ratio
    return sc


def _series_diagonal(A: sp.csr_matrix, terms: int, block: int = 256) -> np.ndarray:
    n = A.shape[0]
    diag = np.zeros(n)
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        cols = np.arange(lo, hi)
        Y = np.zeros((n, hi - lo))
        Y[cols, np.arange(hi - lo)] = 1.0
        acc = np.ones(hi - lo)
        for k in range(1, terms + 1):
            Y = (A @ Y) / k
            acc += Y[cols, np.arange(hi - lo)]
        diag[lo:hi] = acc
    return diag


def subgraph_centrality_series(g: PropertyGraph, terms: int = SERIES_TERMS) -> dict[str, float]:
    return dict(zip(g.projection().ids, _series_diagonal(adjacency(g), terms).tolist()))


def average_neighbor_degree(g: PropertyGraph) -> dict[str, float]:
    proj = g.projection()
    deg = proj.degrees().astype(float)
    sums = adjacency(g) @ deg
    out = np.where(deg > 0, sums / np.maximum(deg, 1), 0.0)
    return dict(zip(proj.ids, out.tolist()))


def core_number(g: PropertyGraph) -> dict[str, int]:
    proj = g.projection()
    cores = kernels.core_number(proj.indptr, proj.indices)
    return dict(zip(proj.ids, (int(c) for c in cores)))


@lru_cache(maxsize=None)
def _bundled_stopwords() -> frozenset:
    text = resources.files("interesting_subgraphs").joinpath("data/stopwords.txt").read_text()
    return frozenset(w.strip() for w in text.split() if w.strip())


def load_stopwords(path=None) -> frozenset:
    """Bundled English list, or one word per line from ``path``."""
    if path is None:
        return _bundled_stopwords()
    return frozenset(w.strip().lower() for w in Path(path).read_text().split() if w.strip())


def tokenize(text: str, stopwords=frozenset()) -> list[str]:
    return [t for t in _TOKEN_SPLIT.split(text.lower())
            if len(t) >= 2 and t not in stopwords]


def vocabulary_diversity(corpus, stopwords=None) -> float:
    """Type-token ratio of non-stopword tokens; 0.0 for an empty corpus."""
    if stopwords is None:
        stopwords = _bundled_stopwords()
    total = 0
    distinct = set()
    for text in corpus:
        toks = tokenize(text or "", stopwords)
        total += len(toks)
        distinct.update(toks)
    return len(distinct) / total if total else 0.0


def graph_corpus(g: PropertyGraph) -> list[str]:
    return [node.props.get("text") or "" for node in g.nodes.values() if node.label == TWEET]


def compute_metrics(candidate, stopwords=None) -> MetricBundle:
    """All six structural metrics plus the corpus diversity.

    ``candidate`` is a CandidateSubgraph (anything with ``graph`` and
    ``corpus``) or a bare PropertyGraph, whose tweet texts then form the
    corpus.
    """
    if isinstance(candidate, PropertyGraph):
        g, corpus = candidate, graph_corpus(candidate)
    else:
        g, corpus = candidate.graph, candidate.corpus
    _require_connected(g, "metric computation")
    nc, ec = _betweenness(g)
    return MetricBundle(
        ev=eigenvector_centrality(g),
        ec=ec,
        nc=nc,
        sc=subgraph_centrality(g),
        z=average_neighbor_degree(g),
        mu=core_number(g),
        diversity=vocabulary_diversity(corpus, stopwords),
    )
