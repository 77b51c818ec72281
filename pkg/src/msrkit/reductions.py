"""Builders for the hardness reductions into Min-Sum-Radii, with witness maps.

Every builder returns a :class:`ReductionArtifact`: the target instance, a
role tag per target point, and the numbers that define the gadget weights.
Class indices ``i`` inside role tags and weight formulas are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Union

from .errors import (
    ExtractionError,
    GraphError,
    InstanceError,
    NotBipartiteError,
    SizeCapError,
    TrivialNoInstance,
)
from .graph import (
    MAX_WEIGHT_SUM,
    SUBDIVISION_CAP,
    WeightedGraph,
    build_graph,
    is_bipartite,
    subdivide_with_origin,
)
from .solvers import Clustering, MsrInstance, Variant


@dataclass(frozen=True)
class MccInstance:
    """Multicolored clique: a unit graph and an ordered partition of its vertices."""

    graph: WeightedGraph
    partition: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        parts = tuple(tuple(int(v) for v in cls) for cls in self.partition)
        object.__setattr__(self, "partition", parts)
        flat = [v for cls in parts for v in cls]
        if any(not cls for cls in parts):
            raise InstanceError("partition classes must be nonempty")
        if sorted(flat) != list(range(self.graph.n)):
            raise InstanceError("partition classes must be disjoint and cover every vertex")
        if not self.graph.unit:
            raise InstanceError("multicolored clique graphs are unweighted")

    @property
    def k(self) -> int:
        return len(self.partition)

    def class_of(self) -> list[int]:
        out = [0] * self.graph.n
        for i, cls in enumerate(self.partition):
            for v in cls:
                out[v] = i
        return out


@dataclass(frozen=True)
class DsInstance:
    """Dominating set of size at most ``k`` in a bipartite graph without isolated vertices."""

    graph: WeightedGraph
    k: int


@dataclass(frozen=True)
class Role:
    kind: str
    params: tuple = ()

    def __str__(self):
        return " ".join([self.kind, *map(str, self.params)])


@dataclass(frozen=True, eq=False)
class ReductionArtifact:
    instance: MsrInstance
    roles: tuple[Role, ...]
    meta: dict[str, Any] = field(default_factory=dict)
    source: Optional[MccInstance] = None

    def points_with(self, kind: str) -> list[int]:
        return [p for p, role in enumerate(self.roles) if role.kind == kind]

    def roles_text(self) -> str:
        return "".join(f"{p} {role}\n" for p, role in enumerate(self.roles))


def _check_mcc(mcc: MccInstance) -> None:
    if mcc.k < 2:
        raise InstanceError("reductions need at least two color classes")


def normalize_mcc(mcc: MccInstance) -> MccInstance:
    """Pad every class with fresh isolated vertices up to the largest class size."""
    _check_mcc(mcc)
    size = max(len(cls) for cls in mcc.partition)
    nxt = mcc.graph.n
    parts = []
    for cls in mcc.partition:
        pad = list(range(nxt, nxt + size - len(cls)))
        nxt += len(pad)
        parts.append(tuple(cls) + tuple(pad))
    if nxt == mcc.graph.n:
        return mcc
    return MccInstance(build_graph(nxt, mcc.graph.edges), tuple(parts))


def _cross_non_edges(mcc: MccInstance):
    """``(i, j, a, b)`` for non-adjacent ``a`` in class ``i`` < ``j`` holding ``b``; 0-based classes."""
    out = []
    for i in range(mcc.k):
        for j in range(i + 1, mcc.k):
            for a in mcc.partition[i]:
                for b in mcc.partition[j]:
                    if not mcc.graph.has_edge(a, b):
                        out.append((i, j, a, b))
    return out


def _finish_graph(n: int, edges: list) -> WeightedGraph:
    if sum(w for _, _, w in edges) > MAX_WEIGHT_SUM:
        raise SizeCapError("reduction weights exceed the 2^62 total weight guard")
    return build_graph(n, edges)


# -------------------------------------------------- weighted bipartite (k + cost)

def reduce_mcc_weighted_bipartite(mcc: MccInstance) -> ReductionArtifact:
    """Weighted bipartite instance whose budget ``2^(k+1) - 2`` is met iff a clique exists."""
    _check_mcc(mcc)
    k = mcc.k
    sizes = [len(cls) for cls in mcc.partition]
    non_edges = _cross_non_edges(mcc)
    for i, j, a, b in non_edges:
        if sizes[i] == 1 and sizes[j] == 1:
            raise TrivialNoInstance(
                f"classes {i + 1} and {j + 1} are singletons joined by a non-edge")

    roles = [Role("original", (v,)) for v in range(mcc.graph.n)]
    edges = []
    for i, cls in enumerate(mcc.partition, start=1):
        x = len(roles)
        roles.append(Role("apex", (i,)))
        edges += [(x, v, 1 << (i - 1)) for v in cls]
    for i, cls in enumerate(mcc.partition, start=1):
        for idx in range(k + 1):
            w = len(roles)
            roles.append(Role("leaf", (i, idx)))
            edges += [(w, v, 1 << i) for v in cls]
    for i, j, a, b in non_edges:
        w = len(roles)
        roles.append(Role("nonedge", (a, b)))
        edges += [(w, v, 1 << (i + 1)) for v in mcc.partition[i] if v != a]
        edges += [(w, v, 1 << (j + 1)) for v in mcc.partition[j] if v != b]

    g = _finish_graph(len(roles), edges)
    bip = is_bipartite(g)
    assert bip is not None, "weighted construction must be bipartite"
    budget = (1 << (k + 1)) - 2
    inst = MsrInstance.from_graph(g, k, budget, Variant.STANDARD)
    meta = {
        "reduction": "thm1",
        "k_source": k,
        "class_sizes": sizes,
        "classes": [list(c) for c in mcc.partition],
        "budget": budget,
        "bipartition": [sorted(bip[0]), sorted(bip[1])],
    }
    return ReductionArtifact(inst, tuple(roles), meta, mcc)


def weighted_clique_certificate(artifact: ReductionArtifact, clique: Iterable[int]) -> Clustering:
    """Clustering of cost exactly the budget built from a multicolored clique."""
    classes = artifact.meta["classes"]
    pairs = []
    for v in clique:
        i = next(idx for idx, cls in enumerate(classes, start=1) if v in cls)
        pairs.append((v, 1 << i))
    return Clustering(tuple(pairs))


def extract_clique_weighted(artifact: ReductionArtifact, c: Clustering) -> frozenset[int]:
    """Centers of a within-budget clustering, read back as a multicolored clique."""
    classes = artifact.meta["classes"]
    hit = [0] * len(classes)
    chosen = []
    for center, _ in c.pairs:
        role = artifact.roles[center]
        if role.kind != "original":
            raise ExtractionError(f"center {center} has role {role}, expected an original vertex")
        v = role.params[0]
        i = next(idx for idx, cls in enumerate(classes) if v in cls)
        hit[i] += 1
        chosen.append(v)
    if hit != [1] * len(classes):
        raise ExtractionError(f"centers hit classes {hit}, need exactly one each")
    return frozenset(chosen)


# -------------------------------------------------- vertex cover + k

def omega_plus(i: int, n: int) -> int:
    return (1 << (2 * i)) * i * n


def omega_minus(i: int, n: int) -> int:
    return (1 << (2 * i + 1)) * i * n


def reduce_mcc_vertex_cover(mcc: MccInstance, guard: bool = True) -> ReductionArtifact:
    """Anchor gadget instance with ``2k`` clusters and vertex cover number at most ``2k``.

    ``guard`` adds, per class, a pendant vertex at distance ``1 + omega_plus``
    from the high anchor. Without it the split "high anchor covers no class
    vertex" reaches the budget while covering every non-edge vertex of the
    class, so no-instances map to yes-instances.
    """
    _check_mcc(mcc)
    mcc = normalize_mcc(mcc)
    k = mcc.k
    n = len(mcc.partition[0])
    top = omega_minus(k, n) + n + 1
    non_edges = _cross_non_edges(mcc)
    n_edges = k * n * 2 + k * 2 * (2 * k + 1) + 4 * len(non_edges) + k
    if top * n_edges > MAX_WEIGHT_SUM:
        raise SizeCapError(f"weights up to {top} over {n_edges} edges overflow the weight guard")

    roles = [Role("original", (v,)) for v in range(mcc.graph.n)]
    hi, lo = {}, {}
    for i in range(1, k + 1):
        hi[i] = len(roles)
        roles.append(Role("anchor", (i, "+")))
        lo[i] = len(roles)
        roles.append(Role("anchor", (i, "-")))
    edges = []
    for i, cls in enumerate(mcc.partition, start=1):
        wp, wm = omega_plus(i, n), omega_minus(i, n)
        for h, v in enumerate(cls, start=1):
            edges.append((hi[i], v, h + wp))
            edges.append((lo[i], v, n - h + 1 + wm))
        for sign, anchor, w in (("+", hi[i], wp), ("-", lo[i], wm)):
            for idx in range(2 * k + 1):
                leaf = len(roles)
                roles.append(Role("leaf", (i, sign, idx)))
                edges.append((anchor, leaf, w))
    if guard:
        for i in range(1, k + 1):
            z = len(roles)
            roles.append(Role("guard", (i,)))
            edges.append((hi[i], z, 1 + omega_plus(i, n)))
    pos = {v: h for cls in mcc.partition for h, v in enumerate(cls, start=1)}
    for i, j, a, b in non_edges:
        w = len(roles)
        roles.append(Role("nonedge", (a, b)))
        for cls_idx, end in ((i + 1, a), (j + 1, b)):
            h = pos[end]
            edges.append((hi[cls_idx], w, h + 1 + omega_plus(cls_idx, n)))
            edges.append((lo[cls_idx], w, n - h + 1 + omega_minus(cls_idx, n)))

    g = _finish_graph(len(roles), edges)
    budget = n * k + sum(omega_plus(i, n) + omega_minus(i, n) for i in range(1, k + 1))
    inst = MsrInstance.from_graph(g, 2 * k, budget, Variant.STANDARD)

    anchors = sorted(hi.values()) + sorted(lo.values())
    anchor_set = set(anchors)
    bip = is_bipartite(g)
    assert bip is not None, "vertex-cover construction must be bipartite"
    assert all(u in anchor_set or v in anchor_set for u, v, _ in g.edges), "anchors must cover every edge"
    dist = inst.metric.dist
    assert all(int(dist[u, v]) == w for u, v, w in g.edges), "edge weight must equal metric distance"

    meta = {
        "reduction": "thm2",
        "k_source": k,
        "n_per_class": n,
        "classes": [list(c) for c in mcc.partition],
        "budget": budget,
        "omega_plus": [omega_plus(i, n) for i in range(1, k + 1)],
        "omega_minus": [omega_minus(i, n) for i in range(1, k + 1)],
        "anchor_plus": [hi[i] for i in range(1, k + 1)],
        "anchor_minus": [lo[i] for i in range(1, k + 1)],
        "guard": guard,
        "bipartition": [sorted(bip[0]), sorted(bip[1])],
    }
    return ReductionArtifact(inst, tuple(roles), meta, mcc)


def vertex_cover_clique_certificate(artifact: ReductionArtifact, clique: Iterable[int]) -> Clustering:
    """Anchor radii ``h + omega_plus`` and ``n - h + omega_minus`` from a clique."""
    meta = artifact.meta
    n = meta["n_per_class"]
    pairs = []
    for v in clique:
        i, cls = next((i, c) for i, c in enumerate(meta["classes"]) if v in c)
        h = cls.index(v) + 1
        pairs.append((meta["anchor_plus"][i], h + meta["omega_plus"][i]))
        pairs.append((meta["anchor_minus"][i], n - h + meta["omega_minus"][i]))
    return Clustering(tuple(pairs))


def extract_clique_vertex_cover(artifact: ReductionArtifact, c: Clustering) -> frozenset[int]:
    """Read ``h_i`` off the high-anchor radius and return ``{v^i_{h_i}}``."""
    meta = artifact.meta
    n = meta["n_per_class"]
    for center, _ in c.pairs:
        if artifact.roles[center].kind != "anchor":
            raise ExtractionError(f"center {center} has role {artifact.roles[center]}, expected an anchor")
    radius = dict(c.pairs)
    chosen = []
    for i, cls in enumerate(meta["classes"]):
        anchor = meta["anchor_plus"][i]
        if anchor not in radius:
            raise ExtractionError(f"high anchor of class {i + 1} is not a center")
        h = radius[anchor] - meta["omega_plus"][i]
        if not 1 <= h <= n:
            raise ExtractionError(f"class {i + 1}: recovered index {h} outside 1..{n}")
        chosen.append(cls[h - 1])
    return frozenset(chosen)


# -------------------------------------------------- dense completions

def _graph_of(a: Union[ReductionArtifact, MsrInstance]) -> tuple[MsrInstance, WeightedGraph]:
    inst = a.instance if isinstance(a, ReductionArtifact) else a
    if inst.graph is None:
        raise InstanceError("augmentation needs the instance's underlying graph")
    if inst.delta is None:
        raise InstanceError("augmentation needs a budget delta")
    return inst, inst.graph


def _augmented(inst: MsrInstance, g: WeightedGraph, pairs) -> MsrInstance:
    fill = inst.delta + 1
    extra = [(u, v, fill) for u, v in pairs if not g.has_edge(u, v)]
    if sum(w for *_, w in g.edges) + fill * len(extra) > MAX_WEIGHT_SUM:
        raise SizeCapError("fill edges overflow the weight guard")
    g2 = build_graph(g.n, list(g.edges) + extra)
    allowed = inst.allowed if inst.variant is Variant.ALLOWED else None
    return MsrInstance.from_graph(g2, inst.k, inst.delta, inst.variant, allowed)


def augment_complete(a: Union[ReductionArtifact, MsrInstance]) -> MsrInstance:
    """Join every non-adjacent pair by an edge of weight ``delta + 1``."""
    inst, g = _graph_of(a)
    return _augmented(inst, g, ((u, v) for u in range(g.n) for v in range(u + 1, g.n)))


def augment_complete_bipartite(a: Union[ReductionArtifact, MsrInstance]) -> MsrInstance:
    """Join every cross-side non-adjacent pair by an edge of weight ``delta + 1``."""
    inst, g = _graph_of(a)
    sides = None
    if isinstance(a, ReductionArtifact) and "bipartition" in a.meta:
        sides = a.meta["bipartition"]
    if sides is None:
        bip = is_bipartite(g)
        if bip is None:
            raise NotBipartiteError("complete-bipartite augmentation needs a bipartite graph")
        sides = [sorted(bip[0]), sorted(bip[1])]
    return _augmented(inst, g, ((min(u, v), max(u, v)) for u in sides[0] for v in sides[1]))


# -------------------------------------------------- dominating set -> exact

def reduce_ds_to_exact(ds: DsInstance) -> MsrInstance:
    """Exact variant on the same graph with ``k`` clusters and budget ``k``.

    ``k`` is clamped to ``n``: a dominating set of size at most ``n`` always
    exists, and ``n`` unit balls around distinct centers realize it.
    """
    g = ds.graph
    if not g.unit:
        raise GraphError("dominating set graphs are unweighted")
    if g.n == 0 or any(not nb for nb in g.adjacency):
        raise GraphError("dominating set graph has an isolated vertex")
    if is_bipartite(g) is None:
        raise NotBipartiteError("dominating set graph must be bipartite")
    if not g.is_connected():
        raise GraphError("dominating set graph must be connected")
    if ds.k < 1:
        raise InstanceError("k must be at least 1")
    k = min(ds.k, g.n)
    return MsrInstance.from_graph(g, k, k, Variant.EXACT)


# -------------------------------------------------- subdivided allowed-centers

def _subdivided(art: ReductionArtifact, allowed: list[int], reduction: str,
                cap: int) -> ReductionArtifact:
    g = art.instance.graph
    unit, origin = subdivide_with_origin(g, cap)
    roles = list(art.roles) + [Role("subdivision", o) for o in origin]
    inst = MsrInstance.from_graph(unit, art.instance.k, art.instance.delta,
                                  Variant.ALLOWED, allowed)
    meta = dict(art.meta, reduction=reduction, weighted_points=g.n)
    meta.pop("bipartition", None)
    return ReductionArtifact(inst, tuple(roles), meta, art.source)


def reduce_mcc_allowed_kdelta(mcc: MccInstance, cap: int = SUBDIVISION_CAP) -> ReductionArtifact:
    """Unit-weight allowed-centers instance: the weighted bipartite gadget, subdivided."""
    art = reduce_mcc_weighted_bipartite(mcc)
    return _subdivided(art, list(range(mcc.graph.n)), "thm5", cap)


def reduce_mcc_allowed_fvs(mcc: MccInstance, guard: bool = True,
                           cap: int = SUBDIVISION_CAP) -> ReductionArtifact:
    """Unit-weight allowed-centers instance on the subdivided anchor gadget."""
    art = reduce_mcc_vertex_cover(mcc, guard=guard)
    anchors = art.meta["anchor_plus"] + art.meta["anchor_minus"]
    out = _subdivided(art, anchors, "thm6", cap)
    assert is_forest_without(out.instance.graph, anchors), "anchors must meet every cycle"
    return out


def is_forest_without(g: WeightedGraph, removed: Iterable[int]) -> bool:
    """Does deleting ``removed`` leave an acyclic graph?"""
    gone = set(removed)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in g.edges:
        if u in gone or v in gone:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


REDUCTIONS = ("thm1", "thm2", "thm3c", "thm3cb", "thm4", "thm5", "thm6")
