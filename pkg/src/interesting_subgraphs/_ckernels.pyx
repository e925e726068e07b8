# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled graph kernels; see ``_pykernels`` for the reference versions."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def brandes(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t nnz = indices.shape[0]
    node_arr = np.zeros(n, dtype=np.float64)
    slot_arr = np.zeros(nnz, dtype=np.float64)
    cdef double[::1] node_bc = node_arr
    cdef double[::1] slot_bc = slot_arr
    cdef double[::1] sigma = np.zeros(n, dtype=np.float64)
    cdef double[::1] delta = np.zeros(n, dtype=np.float64)
    cdef cnp.int64_t[::1] dist = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] order = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t s, v, w, k, head, tail, i
    cdef cnp.int64_t dv, dw
    cdef double coeff, c
    with nogil:
        for s in range(n):
            for i in range(n):
                sigma[i] = 0.0
                delta[i] = 0.0
                dist[i] = -1
            sigma[s] = 1.0
            dist[s] = 0
            order[0] = s
            head = 0
            tail = 1
            while head < tail:
                v = order[head]
                head += 1
                dv = dist[v] + 1
                for k in range(indptr[v], indptr[v + 1]):
                    w = indices[k]
                    if dist[w] < 0:
                        dist[w] = dv
                        order[tail] = w
                        tail += 1
                    if dist[w] == dv:
                        sigma[w] += sigma[v]
            for i in range(tail - 1, -1, -1):
                w = order[i]
                dw = dist[w] - 1
                coeff = (1.0 + delta[w]) / sigma[w]
                for k in range(indptr[w], indptr[w + 1]):
                    v = indices[k]
                    if dist[v] == dw:
                        c = sigma[v] * coeff
                        delta[v] += c
                        slot_bc[k] += c
                if w != s:
                    node_bc[w] += delta[w]
    node_arr /= 2.0
    slot_arr /= 2.0
    return node_arr, slot_arr


def core_number(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    deg_arr = np.diff(np.asarray(indptr)).astype(np.int64)
    if n == 0:
        return deg_arr
    cdef cnp.int64_t[::1] deg = deg_arr
    cdef cnp.int64_t md = deg_arr.max()
    cdef cnp.int64_t[::1] bins = np.zeros(md + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] pos = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] vert = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t i, v, u, w, k, d
    cdef cnp.int64_t start, tmp, du, pu, pw
    with nogil:
        for v in range(n):
            bins[deg[v]] += 1
        start = 0
        for d in range(md + 1):
            tmp = bins[d]
            bins[d] = start
            start += tmp
        for v in range(n):
            pos[v] = bins[deg[v]]
            vert[pos[v]] = v
            bins[deg[v]] += 1
        for d in range(md, 0, -1):
            bins[d] = bins[d - 1]
        bins[0] = 0
        for i in range(n):
            v = vert[i]
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if deg[u] > deg[v]:
                    du = deg[u]
                    pu = pos[u]
                    pw = bins[du]
                    w = vert[pw]
                    if u != w:
                        pos[u] = pw
                        pos[w] = pu
                        vert[pu] = w
                        vert[pw] = u
                    bins[du] += 1
                    deg[u] -= 1
    return deg_arr
