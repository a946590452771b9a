"""Array kernels for large-tree statistics.

Everything here operates on preorder out-degree words stored as int32/int64
numpy arrays; rooting does not change graph distances or degrees, so these
kernels serve unrooted statistics directly.  When numba is importable the
hot loops are jitted; otherwise the same code runs as plain Python (slow but
correct), keeping the package usable without a compiler.
"""

from __future__ import annotations

import numpy as np

__all__ = ["HAVE_NUMBA", "parents_from_code", "bfs_eccentricity", "tree_diameter", "batch_diameters"]

try:  # pragma: no cover - environment dependent
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def parents_from_code(code):
    n = code.shape[0]
    parent = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    remaining = np.empty(n, np.int64)
    top = 0
    stack[0] = 0
    remaining[0] = code[0]
    for v in range(1, n):
        while remaining[top] == 0:
            top -= 1
        p = stack[top]
        parent[v] = p
        remaining[top] -= 1
        top += 1
        stack[top] = v
        remaining[top] = code[v]
    return parent


@njit(cache=True)
def _csr_from_parents(parent):
    n = parent.shape[0]
    deg = np.zeros(n, np.int64)
    for v in range(1, n):
        deg[v] += 1
        deg[parent[v]] += 1
    offsets = np.zeros(n + 1, np.int64)
    for v in range(n):
        offsets[v + 1] = offsets[v] + deg[v]
    fill = offsets[:n].copy()
    nbr = np.empty(2 * (n - 1), np.int64)
    for v in range(1, n):
        p = parent[v]
        nbr[fill[v]] = p
        fill[v] += 1
        nbr[fill[p]] = v
        fill[p] += 1
    return offsets, nbr


@njit(cache=True)
def _bfs_far(offsets, nbr, start, dist, queue):
    n = dist.shape[0]
    for i in range(n):
        dist[i] = -1
    dist[start] = 0
    queue[0] = start
    head = 0
    tail = 1
    far = start
    fardist = 0
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v]
        if dv > fardist:
            fardist = dv
            far = v
        for idx in range(offsets[v], offsets[v + 1]):
            u = nbr[idx]
            if dist[u] < 0:
                dist[u] = dv + 1
                queue[tail] = u
                tail += 1
    return far, fardist


@njit(cache=True)
def tree_diameter(code):
    """Diameter of the tree encoded by one out-degree word (double BFS)."""
    parent = parents_from_code(code)
    offsets, nbr = _csr_from_parents(parent)
    n = code.shape[0]
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    far, _ = _bfs_far(offsets, nbr, 0, dist, queue)
    _, diam = _bfs_far(offsets, nbr, far, dist, queue)
    return diam


@njit(cache=True)
def bfs_eccentricity(code, start):
    parent = parents_from_code(code)
    offsets, nbr = _csr_from_parents(parent)
    n = code.shape[0]
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    _, ecc = _bfs_far(offsets, nbr, start, dist, queue)
    return ecc


@njit(cache=True)
def batch_diameters(codes):
    """Diameters for a (count, n) matrix of out-degree words."""
    count = codes.shape[0]
    out = np.empty(count, np.int64)
    for i in range(count):
        out[i] = tree_diameter(codes[i])
    return out
