"""Exact structural parameters of small graphs.

All parameters ignore edge weights except the neighborhood counts, which
live on the metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .errors import SizeCapError
from .graph import MetricSpace, WeightedGraph, shortest_path_metric

LONGEST_PATH_CAP = 16
TREEDEPTH_CAP = 12
TREEWIDTH_CAP = 11
VERTEX_COVER_CAP = 32
FVS_CAP = 16


def _cap(g: WeightedGraph, cap: int, what: str) -> None:
    if g.n > cap:
        raise SizeCapError(f"{what} is exact only up to n={cap}, got n={g.n}")


def _adj_masks(g: WeightedGraph) -> list[int]:
    masks = [0] * g.n
    for u, v, _ in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def neighborhood_profile(m: MetricSpace) -> tuple[list[int], int]:
    """Distinct balls per point and their maximum.

    Over integer distances each candidate radius adds at least one point, so
    the count is just the number of distinct finite distances.
    """
    counts = [len(m.candidate_radii(v)) for v in range(m.n)]
    return counts, max(counts, default=0)


def longest_path_order(g: WeightedGraph, cap: int = LONGEST_PATH_CAP) -> int:
    """Vertex count of a longest simple path."""
    _cap(g, cap, "longest path")
    if g.n == 0:
        return 0
    adj = _adj_masks(g)
    ends = [0] * (1 << g.n)
    for v in range(g.n):
        ends[1 << v] = 1 << v
    best = 1
    for mask in range(1, 1 << g.n):
        e = ends[mask]
        if not e:
            continue
        best = max(best, mask.bit_count())
        for v in _bits(e):
            for u in _bits(adj[v] & ~mask):
                ends[mask | (1 << u)] |= 1 << u
    return best


def _components(mask: int, adj: list[int]) -> list[int]:
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        rest &= ~comp
    return comps


def treedepth_exact(g: WeightedGraph, cap: int = TREEDEPTH_CAP) -> int:
    """Minimum elimination-forest height (a single vertex has treedepth 1)."""
    _cap(g, cap, "treedepth")
    adj = _adj_masks(g)

    @lru_cache(maxsize=None)
    def td_connected(mask: int) -> int:
        if mask & (mask - 1) == 0:
            return 1
        best = mask.bit_count()
        for v in _bits(mask):
            sub = max((td_connected(c) for c in _components(mask & ~(1 << v), adj)), default=0)
            best = min(best, 1 + sub)
        return best

    full = (1 << g.n) - 1
    return max((td_connected(c) for c in _components(full, adj)), default=0)


def treewidth_exact(g: WeightedGraph, cap: int = TREEWIDTH_CAP) -> int:
    """Treewidth by dynamic programming over eliminated vertex sets."""
    _cap(g, cap, "treewidth")
    n = g.n
    if n == 0:
        return 0
    adj = _adj_masks(g)

    def q_size(s: int, v: int) -> int:
        # vertices outside s + v reachable from v through s
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            nb = 0
            for u in _bits(frontier):
                nb |= adj[u]
            nb &= ~seen
            seen |= nb
            out |= nb & ~s
            frontier = nb & s
        return out.bit_count()

    tw = [0] * (1 << n)
    tw[0] = -1
    for s in range(1, 1 << n):
        best = n
        for v in _bits(s):
            rest = s & ~(1 << v)
            best = min(best, max(tw[rest], q_size(rest, v)))
        tw[s] = best
    return tw[(1 << n) - 1]


def vertex_cover_number(g: WeightedGraph, cap: int = VERTEX_COVER_CAP) -> int:
    """Minimum vertex cover by branching on a maximum-degree vertex."""
    _cap(g, cap, "vertex cover")
    adj = _adj_masks(g)
    best = [g.n]

    def go(alive: int, used: int) -> None:
        if used >= best[0]:
            return
        pick, deg = -1, 0
        for v in _bits(alive):
            d = (adj[v] & alive).bit_count()
            if d > deg:
                pick, deg = v, d
        if deg == 0:
            best[0] = used
            return
        if deg == 1:
            # all components are edges or paths ending here; taking the neighbor is safe
            u = next(_bits(adj[pick] & alive))
            go(alive & ~(1 << u), used + 1)
            return
        go(alive & ~(1 << pick), used + 1)
        nb = adj[pick] & alive
        go(alive & ~nb & ~(1 << pick), used + nb.bit_count())

    go((1 << g.n) - 1, 0)
    return best[0]


def _acyclic_without(g: WeightedGraph, removed: int) -> bool:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in g.edges:
        if removed >> u & 1 or removed >> v & 1:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def feedback_vertex_number(g: WeightedGraph, cap: int = FVS_CAP) -> int:
    """Smallest vertex set whose deletion leaves a forest; subsets by size."""
    _cap(g, cap, "feedback vertex set")
    for size in range(g.n + 1):
        for sub in combinations(range(g.n), size):
            if _acyclic_without(g, sum(1 << v for v in sub)):
                return size
    return g.n


@dataclass(frozen=True)
class StructuralProfile:
    per_vertex_neighborhood_counts: tuple[int, ...]
    neighborhood_count_max: int
    longest_path_order: int
    treedepth: int
    treewidth: int
    vertex_cover: int
    feedback_vertex: int

    def report(self) -> str:
        return (f"td={self.treedepth} tw={self.treewidth} vc={self.vertex_cover} "
                f"fvs={self.feedback_vertex} ell={self.longest_path_order} "
                f"nbhd={self.neighborhood_count_max}")

    def violations(self, unit: bool) -> list[str]:
        """Broken links of the bound chain; empty for a consistent profile.

        The neighborhood-count bounds only hold on unit graphs: a star with
        distinct weights has one ball per weight around its hub.
        """
        out = []
        td, ell, nb = self.treedepth, self.longest_path_order, self.neighborhood_count_max
        if self.treewidth > td:
            out.append(f"tw={self.treewidth} > td={td}")
        if ell and (ell - 1).bit_length() > td:
            out.append(f"ceil(log2 ell)={(ell - 1).bit_length()} > td={td}")
        if td > ell:
            out.append(f"td={td} > ell={ell}")
        if not unit:
            return out
        if nb > 1 << td:
            out.append(f"nbhd={nb} > 2^td={1 << td}")
        if nb > ell:
            out.append(f"nbhd={nb} > ell={ell}")
        return out


def structural_profile(g: WeightedGraph, metric: Optional[MetricSpace] = None) -> StructuralProfile:
    m = metric if metric is not None else shortest_path_metric(g, allow_disconnected=True)
    counts, top = neighborhood_profile(m)
    return StructuralProfile(
        tuple(counts), top,
        longest_path_order(g),
        treedepth_exact(g),
        treewidth_exact(g),
        vertex_cover_number(g),
        feedback_vertex_number(g),
    )
