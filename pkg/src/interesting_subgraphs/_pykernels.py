"""Pure-Python reference versions of the hot graph kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``ISUB_PURE_PYTHON=1`` is set.
"""
from collections import deque

import numpy as np


def brandes(indptr, indices):
    """Shortest-path betweenness on an undirected CSR graph.

    Returns ``(node_bc, slot_bc)``: per-node betweenness over unordered
    pairs, and per-CSR-slot edge contributions. The betweenness of the
    undirected edge {v, w} is ``slot_bc[v->w] + slot_bc[w->v]``.
    """
    ptr = indptr.tolist()
    idx = indices.tolist()
    n = len(ptr) - 1
    node_bc = [0.0] * n
    slot_bc = [0.0] * len(idx)
    for s in range(n):
        sigma = [0] * n
        dist = [-1] * n
        delta = [0.0] * n
        sigma[s] = 1
        dist[s] = 0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v] + 1
            for k in range(ptr[v], ptr[v + 1]):
                w = idx[k]
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
        for w in reversed(order):
            dw = dist[w] - 1
            coeff = (1.0 + delta[w]) / sigma[w]
            for k in range(ptr[w], ptr[w + 1]):
                v = idx[k]
                if dist[v] == dw:
                    c = sigma[v] * coeff
                    delta[v] += c
                    slot_bc[k] += c
            if w != s:
                node_bc[w] += delta[w]
    node = np.asarray(node_bc) / 2.0
    slots = np.asarray(slot_bc) / 2.0
    return node, slots


def core_number(indptr, indices):
    """Core numbers by bucket-sorted minimum-degree peeling (O(m))."""
    ptr = indptr.tolist()
    idx = indices.tolist()
    n = len(ptr) - 1
    deg = [ptr[i + 1] - ptr[i] for i in range(n)]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    md = max(deg)
    bins = [0] * (md + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(md + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(md, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    for i in range(n):
        v = vert[i]
        for k in range(ptr[v], ptr[v + 1]):
            u = idx[k]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bins[du] += 1
                deg[u] -= 1
    return np.asarray(deg, dtype=np.int64)
