"""Pure-Python/numpy twins of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import heapq

import numpy as np

INF = np.iinfo(np.int64).max


def apsp_unit(indptr, indices, n):
    out = np.full((n, n), INF, dtype=np.int64)
    adj = [indices[indptr[u]:indptr[u + 1]].tolist() for u in range(n)]
    for s in range(n):
        row = [-1] * n
        row[s] = 0
        frontier = [s]
        level = 0
        while frontier:
            level += 1
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if row[v] < 0:
                        row[v] = level
                        nxt.append(v)
            frontier = nxt
        r = np.asarray(row, dtype=np.int64)
        r[r < 0] = INF
        out[s] = r
    return out


def apsp_weighted(indptr, indices, weights, n):
    out = np.full((n, n), INF, dtype=np.int64)
    adj = [
        list(zip(indices[indptr[u]:indptr[u + 1]].tolist(),
                 weights[indptr[u]:indptr[u + 1]].tolist()))
        for u in range(n)
    ]
    for s in range(n):
        dist = {s: 0}
        done = set()
        heap = [(0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w in adj[u]:
                nd = d + w
                if nd < dist.get(v, INF):
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for v, d in dist.items():
            out[s, v] = d
    return out


def _sat_add(cost, table):
    res = table + cost
    res[table >= INF - cost] = INF
    return res


def cover_layers(masks, costs, point_ptr, point_balls, n, layers):
    size = 1 << n
    idx = np.arange(size, dtype=np.uint64)
    f = np.full((layers + 1, size), INF, dtype=np.int64)
    f[0, 0] = 0
    masks = [np.uint64(m) for m in masks]
    for t in range(1, layers + 1):
        prev = f[t - 1]
        cur = prev.copy()
        for m, c in zip(masks, costs):
            np.minimum(cur, _sat_add(int(c), prev[(idx & ~m).astype(np.intp)]), out=cur)
        cur[0] = 0
        f[t] = cur
    return f


def group_cover(masks, costs, group_ptr, n, k):
    size = 1 << n
    groups = len(group_ptr) - 1
    idx = np.arange(size, dtype=np.uint64)
    cur = np.full((k + 1, size), INF, dtype=np.int64)
    cur[0, 0] = 0
    choice = np.zeros((groups, k + 1, size), dtype=np.uint8)
    for g in range(groups):
        old = cur.copy()
        for t in range(1, k + 1):
            for e in range(group_ptr[g], group_ptr[g + 1]):
                sub = (idx & ~np.uint64(masks[e])).astype(np.intp)
                cand = _sat_add(int(costs[e]), old[t - 1][sub])
                better = cand < cur[t]
                cur[t][better] = cand[better]
                choice[g, t][better] = e - group_ptr[g] + 1
    return cur, choice
