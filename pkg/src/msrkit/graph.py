"""Weighted graphs, their shortest-path metrics, balls and subdivision."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from ._backend import INF, kernels
from .errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphError,
    SelfLoopError,
    SizeCapError,
    VertexRangeError,
    WeightOverflowError,
    ZeroWeightError,
)

MAX_WEIGHT_SUM = 1 << 62
SUBDIVISION_CAP = 10**6


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph on vertices ``0..n-1`` with integer weights >= 1.

    Build through :func:`build_graph`, which validates the edge list.
    """

    n: int
    edges: tuple[tuple[int, int, int], ...]
    unit: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "unit", all(w == 1 for _, _, w in self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def weight_of(self) -> dict[tuple[int, int], int]:
        return {(u, v): w for u, v, w in self.edges} | {(v, u): w for u, v, w in self.edges}

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric CSR arrays ``(indptr, indices, weights)``."""
        deg = np.zeros(self.n + 1, dtype=np.int64)
        for u, v, _ in self.edges:
            deg[u + 1] += 1
            deg[v + 1] += 1
        indptr = np.cumsum(deg)
        fill = indptr[:-1].copy()
        indices = np.empty(2 * self.m, dtype=np.int64)
        weights = np.empty(2 * self.m, dtype=np.int64)
        for u, v, w in self.edges:
            indices[fill[u]], weights[fill[u]] = v, w
            fill[u] += 1
            indices[fill[v]], weights[fill[v]] = u, w
            fill[v] += 1
        return indptr, indices, weights

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> WeightedGraph:
    """Validate ``(u, v, w)`` triples (``w`` optional, default 1) into a graph."""
    if n < 0:
        raise VertexRangeError(f"vertex count must be non-negative, got {n}")
    seen = set()
    norm = []
    total = 0
    for e in edges:
        if len(e) == 2:
            u, v, w = e[0], e[1], 1
        elif len(e) == 3:
            u, v, w = e
        else:
            raise GraphError(f"edge must be (u, v) or (u, v, w): {e!r}")
        for x in (u, v, w):
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise GraphError(f"non-integer entry in edge {e!r}")
        u, v, w = int(u), int(v), int(w)
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if w < 1:
            raise ZeroWeightError(f"edge ({u}, {v}) has weight {w} < 1")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        seen.add(key)
        total += w
        if total > MAX_WEIGHT_SUM:
            raise WeightOverflowError("total edge weight exceeds 2^62")
        norm.append((key[0], key[1], w))
    return WeightedGraph(n, tuple(norm))


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """Dense distance table; unreachable pairs hold :data:`INF`."""

    dist: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.dist, dtype=np.int64)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @cached_property
    def connected(self) -> bool:
        return bool((self.dist != INF).all())

    def d(self, u: int, v: int) -> int:
        return int(self.dist[u, v])

    def ball(self, c: int, r: int) -> frozenset[int]:
        return ball(self, c, r)

    def candidate_radii(self, c: int, budget: Optional[int] = None) -> list[int]:
        return candidate_radii(self, c, budget)

    @cached_property
    def nearest_other(self) -> np.ndarray:
        """Distance from each point to its closest other point (INF if none)."""
        if self.n <= 1:
            return np.full(self.n, INF, dtype=np.int64)
        d = self.dist.copy()
        np.fill_diagonal(d, INF)
        return d.min(axis=1)

    def __eq__(self, other):
        return isinstance(other, MetricSpace) and np.array_equal(self.dist, other.dist)

    __hash__ = None


def shortest_path_metric(g: WeightedGraph, allow_disconnected: bool = False) -> MetricSpace:
    """All-pairs shortest paths; BFS for unit graphs, Dijkstra otherwise.

    Disconnected graphs raise unless ``allow_disconnected`` is set, in which
    case unreachable pairs carry :data:`INF`.
    """
    if not allow_disconnected and not g.is_connected():
        raise DisconnectedGraphError(f"graph with n={g.n} is not connected")
    indptr, indices, weights = g.csr()
    if g.unit:
        dist = kernels.apsp_unit(indptr, indices, g.n)
    else:
        dist = kernels.apsp_weighted(indptr, indices, weights, g.n)
    return MetricSpace(dist)


def _check_point(m: MetricSpace, c: int) -> None:
    if not 0 <= c < m.n:
        raise VertexRangeError(f"point {c} out of range for n={m.n}")


def ball(m: MetricSpace, c: int, r: int) -> frozenset[int]:
    _check_point(m, c)
    if r < 0:
        raise ValueError("radius must be non-negative")
    return frozenset(np.flatnonzero(m.dist[c] <= r).tolist())


def candidate_radii(m: MetricSpace, c: int, budget: Optional[int] = None) -> list[int]:
    """Sorted distinct finite distances from ``c``, optionally capped at ``budget``."""
    _check_point(m, c)
    row = m.dist[c]
    vals = np.unique(row[row != INF])
    if budget is not None:
        vals = vals[vals <= budget]
    return vals.tolist()


def subdivide_to_unit(g: WeightedGraph, cap: int = SUBDIVISION_CAP) -> WeightedGraph:
    """Replace each weight-``w`` edge by a path of ``w`` unit edges.

    Original vertices keep indices ``0..n-1``; fresh vertices follow in edge
    order.
    """
    return subdivide_with_origin(g, cap)[0]


def subdivide_with_origin(g: WeightedGraph, cap: int = SUBDIVISION_CAP):
    """:func:`subdivide_to_unit` plus, per fresh vertex, the ``(u, v, pos)``
    of the edge it sits on (``pos`` counts unit steps from ``u``)."""
    extra = sum(w - 1 for _, _, w in g.edges)
    if g.n + extra > cap:
        raise SizeCapError(f"subdivision would create {g.n + extra} vertices (cap {cap})")
    edges = []
    origin = []
    nxt = g.n
    for u, v, w in g.edges:
        prev = u
        for pos in range(1, w):
            edges.append((prev, nxt, 1))
            origin.append((u, v, pos))
            prev = nxt
            nxt += 1
        edges.append((prev, v, 1))
    return build_graph(nxt, edges), origin


def is_bipartite(g: WeightedGraph) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """A 2-coloring ``(side0, side1)`` or ``None`` for an odd cycle."""
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in g.adjacency[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    return None
    side0 = frozenset(v for v in range(g.n) if color[v] == 0)
    return side0, frozenset(range(g.n)) - side0


def parse_graph_text(text: str) -> WeightedGraph:
    """Read ``n m`` followed by ``m`` lines ``u v [w]``."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphError("empty graph file")
    try:
        n, m = (int(x) for x in rows[0][:2])
        if len(rows[0]) != 2:
            raise ValueError
        edges = [tuple(int(x) for x in r) for r in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"graph file must contain integers only: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def format_graph_text(g: WeightedGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    for u, v, w in g.edges:
        lines.append(f"{u} {v}" if g.unit else f"{u} {v} {w}")
    return "\n".join(lines) + "\n"
