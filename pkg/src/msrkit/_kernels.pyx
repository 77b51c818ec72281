# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: all-pairs shortest paths and bitmask cover tables.

Every function here has a drop-in twin in :mod:`msrkit._fallback`; both
return identical arrays for identical input.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

cnp.import_array()

cdef int64_t INF = 0x7FFFFFFFFFFFFFFF


def apsp_unit(const int64_t[:] indptr, const int64_t[:] indices, Py_ssize_t n):
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.full((n, n), INF, dtype=np.int64)
    cdef int64_t[:, :] dist = out
    cdef int64_t[:] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, head, tail, u, v, e
    cdef int64_t du
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[s, u] + 1
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if dist[s, v] == INF:
                    dist[s, v] = du
                    queue[tail] = v
                    tail += 1
    return out


def apsp_weighted(const int64_t[:] indptr, const int64_t[:] indices,
                  const int64_t[:] weights, Py_ssize_t n):
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.full((n, n), INF, dtype=np.int64)
    cdef int64_t[:, :] dist = out
    cdef priority_queue[pair[int64_t, int64_t]] heap
    cdef pair[int64_t, int64_t] top
    cdef Py_ssize_t s, u, v, e
    cdef int64_t d, nd
    for s in range(n):
        dist[s, s] = 0
        heap.push(pair[int64_t, int64_t](0, s))
        while not heap.empty():
            top = heap.top()
            heap.pop()
            d = -top.first
            u = top.second
            if d > dist[s, u]:
                continue
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                nd = d + weights[e]
                if nd < dist[s, v]:
                    dist[s, v] = nd
                    heap.push(pair[int64_t, int64_t](-nd, v))
    return out


cdef inline int64_t _sat_add(int64_t a, int64_t b) nogil:
    if a == INF or b == INF or a > INF - b:
        return INF
    return a + b


def cover_layers(const uint64_t[:] masks, const int64_t[:] costs,
                 const int64_t[:] point_ptr, const int64_t[:] point_balls,
                 Py_ssize_t n, Py_ssize_t layers):
    """Table ``f[t, S]`` = cheapest union of at most ``t`` balls covering ``S``.

    Balls are items; the ball covering the lowest set bit of ``S`` is
    branched on, so only balls listed in ``point_balls`` for that bit are
    tried.
    """
    cdef Py_ssize_t size = <Py_ssize_t>1 << n
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.full((layers + 1, size), INF, dtype=np.int64)
    cdef int64_t[:, :] f = out
    cdef Py_ssize_t t, e, low
    cdef uint64_t s, sub
    cdef int64_t best, cand
    f[0, 0] = 0
    for t in range(1, layers + 1):
        f[t, 0] = 0
        for s in range(1, <uint64_t>size):
            best = f[t - 1, s]
            low = 0
            while not ((s >> low) & 1):
                low += 1
            for e in range(point_ptr[low], point_ptr[low + 1]):
                sub = s & ~masks[point_balls[e]]
                cand = _sat_add(costs[point_balls[e]], f[t - 1, sub])
                if cand < best:
                    best = cand
            f[t, s] = best
    return out


def group_cover(const uint64_t[:] masks, const int64_t[:] costs,
                const int64_t[:] group_ptr, Py_ssize_t n, Py_ssize_t k):
    """Exactly-``t`` cover with at most one ball per group (center).

    Returns ``(f, choice)`` where ``f[t, S]`` is the cheapest cover of ``S``
    by balls from ``t`` distinct groups and ``choice[g, t, S]`` is
    ``1 + offset`` of the ball group ``g`` took in the optimal state, or 0.
    """
    cdef Py_ssize_t size = <Py_ssize_t>1 << n
    cdef Py_ssize_t groups = group_ptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=2] cur_arr = np.full((k + 1, size), INF, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] old_arr = np.empty((k + 1, size), dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=3] choice_arr = np.zeros((groups, k + 1, size), dtype=np.uint8)
    cdef int64_t[:, :] cur = cur_arr
    cdef int64_t[:, :] old = old_arr
    cdef uint8_t[:, :, :] choice = choice_arr
    cdef Py_ssize_t g, t, e
    cdef uint64_t s
    cdef int64_t cand
    cur[0, 0] = 0
    for g in range(groups):
        old[:, :] = cur
        for t in range(1, k + 1):
            for s in range(<uint64_t>size):
                for e in range(group_ptr[g], group_ptr[g + 1]):
                    cand = _sat_add(costs[e], old[t - 1, s & ~masks[e]])
                    if cand < cur[t, s]:
                        cur[t, s] = cand
                        choice[g, t, s] = <uint8_t>(e - group_ptr[g] + 1)
    return cur_arr, choice_arr
