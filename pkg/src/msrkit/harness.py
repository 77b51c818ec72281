"""Brute-force source oracles, seeded generators and reduction fuzzing.

Randomness comes from :class:`XorShift64Star`, seeded through SplitMix64.
Both use fixed published constants so a ``(seed, params)`` pair names the
same instance on every platform.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional

from .errors import ExtractionError, SizeCapError, SolverTimeout, TrivialNoInstance
from .graph import WeightedGraph, build_graph, is_bipartite
from .instances import dump_instance, format_ds_text, format_mcc_text
from .reductions import (
    DsInstance,
    MccInstance,
    ReductionArtifact,
    augment_complete,
    augment_complete_bipartite,
    extract_clique_weighted,
    extract_clique_vertex_cover,
    is_forest_without,
    reduce_ds_to_exact,
    reduce_mcc_allowed_fvs,
    reduce_mcc_allowed_kdelta,
    reduce_mcc_vertex_cover,
    reduce_mcc_weighted_bipartite,
)
from .solvers import MsrInstance, Variant, decide, solve, verify_clustering

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MCC_BRUTE_CAP = 10**6
DS_BRUTE_CAP = 20


def splitmix64(x: int) -> int:
    x = (x + GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class XorShift64Star:
    """xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D)."""

    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def chance(self, p: float) -> bool:
        if p >= 1:
            return True
        if p <= 0:
            return False
        return self.random() < p

    def choice(self, seq):
        return seq[self.below(len(seq))]


def trial_seed(seed: int, index: int) -> int:
    return splitmix64((seed * GOLDEN + index) & MASK64)


# -------------------------------------------------- generators

def random_mcc(seed: int, k: int, class_size: int, edge_prob: Optional[float] = None,
               fixed_size: bool = False) -> MccInstance:
    """Classes of ``1..class_size`` vertices (exactly ``class_size`` when fixed).

    ``edge_prob=None`` draws the density per instance so that a batch mixes
    yes- and no-instances. Only cross-class edges are generated; edges inside
    a class cannot take part in a multicolored clique.
    """
    rng = XorShift64Star(seed)
    sizes = [class_size if fixed_size else rng.between(1, class_size) for _ in range(k)]
    p = rng.random() if edge_prob is None else edge_prob
    parts, nxt = [], 0
    for s in sizes:
        parts.append(tuple(range(nxt, nxt + s)))
        nxt += s
    edges = []
    for i, j in combinations(range(k), 2):
        for a, b in product(parts[i], parts[j]):
            if rng.chance(p):
                edges.append((a, b))
    return MccInstance(build_graph(nxt, edges), tuple(parts))


def random_graph(seed: int, n: int, edge_prob: float = 0.5, max_weight: int = 1,
                 max_tries: int = 1000) -> WeightedGraph:
    """Connected graph on ``n`` vertices; resamples from the same stream until connected."""
    rng = XorShift64Star(seed)
    for _ in range(max_tries):
        edges = [(u, v, rng.between(1, max_weight))
                 for u, v in combinations(range(n), 2) if rng.chance(edge_prob)]
        g = build_graph(n, edges)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected sample after {max_tries} tries (n={n}, p={edge_prob})")


def random_bipartite_graph(seed: int, n: int, edge_prob: float = 0.5, max_weight: int = 1,
                           max_tries: int = 1000) -> WeightedGraph:
    """Connected bipartite graph with ``n >= 2`` vertices and random sides."""
    rng = XorShift64Star(seed)
    for _ in range(max_tries):
        side = [rng.below(2) for _ in range(n)]
        edges = [(u, v, rng.between(1, max_weight))
                 for u, v in combinations(range(n), 2)
                 if side[u] != side[v] and rng.chance(edge_prob)]
        g = build_graph(n, edges)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected bipartite sample after {max_tries} tries")


def random_instance(seed: int, n_max: int = 8, max_weight: int = 5,
                    ks: tuple[int, ...] = (1, 2, 3),
                    variants: tuple[Variant, ...] = tuple(Variant)) -> MsrInstance:
    """Small connected instance; half unit-weight, half weighted up to ``max_weight``."""
    rng = XorShift64Star(seed)
    n = rng.between(1, n_max)
    w = 1 if rng.below(2) == 0 else max_weight
    p = 0.25 + 0.6 * rng.random()
    variant = variants[rng.below(len(variants))]
    k = ks[rng.below(len(ks))]
    allowed = None
    if variant is Variant.ALLOWED:
        allowed = [v for v in range(n) if rng.chance(0.5)] or [rng.below(n)]
    g = random_graph(rng.next_u64(), n, p, w)
    return MsrInstance.from_graph(g, k, None, variant, allowed)


# -------------------------------------------------- brute-force oracles

def is_multicolored_clique(mcc: MccInstance, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    if len(vs) != mcc.k:
        return False
    cls = mcc.class_of()
    if sorted(cls[v] for v in vs) != list(range(mcc.k)):
        return False
    return all(mcc.graph.has_edge(a, b) for a, b in combinations(vs, 2))


def solve_mcc_bruteforce(mcc: MccInstance) -> Optional[frozenset[int]]:
    """Some multicolored clique, searched class by class, or ``None``."""
    total = 1
    for cls in mcc.partition:
        total *= len(cls)
    if total > MCC_BRUTE_CAP:
        raise SizeCapError(f"{total} vertex combinations exceed the cap {MCC_BRUTE_CAP}")
    adj = mcc.graph.adjacency

    def go(i: int, chosen: list[int]) -> Optional[list[int]]:
        if i == mcc.k:
            return chosen
        for v in mcc.partition[i]:
            if all(v in adj[u] for u in chosen):
                found = go(i + 1, chosen + [v])
                if found is not None:
                    return found
        return None

    found = go(0, [])
    return None if found is None else frozenset(found)


def is_dominating_set(g: WeightedGraph, vertices: Iterable[int]) -> bool:
    covered = set()
    for v in vertices:
        covered.add(v)
        covered |= g.adjacency[v]
    return len(covered) == g.n


def solve_ds_bruteforce(g: WeightedGraph, k: int) -> Optional[frozenset[int]]:
    """Smallest dominating set if it has at most ``k`` vertices."""
    if g.n > DS_BRUTE_CAP:
        raise SizeCapError(f"dominating-set brute force is capped at n={DS_BRUTE_CAP}")
    full = (1 << g.n) - 1
    closed = [(1 << v) | sum(1 << u for u in g.adjacency[v]) for v in range(g.n)]
    for size in range(0, min(k, g.n) + 1):
        for sub in combinations(range(g.n), size):
            acc = 0
            for v in sub:
                acc |= closed[v]
            if acc == full:
                return frozenset(sub)
    return None


# -------------------------------------------------- exhaustive source families

def all_small_mcc(k: int = 2, max_class: int = 2) -> Iterator[MccInstance]:
    """Every class-size vector up to ``max_class`` and every cross-edge subset."""
    for sizes in product(range(1, max_class + 1), repeat=k):
        parts, nxt = [], 0
        for s in sizes:
            parts.append(tuple(range(nxt, nxt + s)))
            nxt += s
        cross = [(a, b) for i, j in combinations(range(k), 2)
                 for a, b in product(parts[i], parts[j])]
        for bits in range(1 << len(cross)):
            edges = [e for t, e in enumerate(cross) if bits >> t & 1]
            yield MccInstance(build_graph(nxt, edges), tuple(parts))


def atlas_graphs(max_n: int = 7, min_n: int = 1) -> Iterator[WeightedGraph]:
    """All connected unlabeled graphs with ``min_n..max_n`` vertices (networkx atlas)."""
    from networkx.generators.atlas import graph_atlas_g

    if max_n > 7:
        raise SizeCapError("the graph atlas stops at 7 vertices")
    for h in graph_atlas_g():
        n = h.number_of_nodes()
        if not min_n <= n <= max_n:
            continue
        g = build_graph(n, sorted((min(u, v), max(u, v)) for u, v in h.edges()))
        if g.is_connected():
            yield g


def ds_source_graphs(max_n: int = 7) -> Iterator[WeightedGraph]:
    """Connected bipartite graphs without isolated vertices."""
    for g in atlas_graphs(max_n, min_n=2):
        if is_bipartite(g) is not None:
            yield g


# -------------------------------------------------- fuzzing

@dataclass
class TrialResult:
    seed: int
    source_answer: Optional[bool]
    target_answer: Optional[bool]
    digest: str
    witness_error: str = ""
    timed_out: bool = False
    artifacts: dict[str, str] = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        return not self.timed_out and self.source_answer == self.target_answer


@dataclass
class EquivalenceReport:
    reduction: str
    trials: int = 0
    agreements: int = 0
    mismatches: list[tuple[int, bool, bool, str]] = field(default_factory=list)
    witness_failures: list[tuple[int, str]] = field(default_factory=list)
    timeouts: list[int] = field(default_factory=list)
    yes_instances: int = 0

    @property
    def clean(self) -> bool:
        return not (self.mismatches or self.witness_failures or self.timeouts)

    def add(self, r: TrialResult) -> None:
        self.trials += 1
        if r.timed_out:
            self.timeouts.append(r.seed)
        elif r.agrees:
            self.agreements += 1
        else:
            self.mismatches.append((r.seed, r.source_answer, r.target_answer, r.digest))
        if r.source_answer:
            self.yes_instances += 1
        if r.witness_error:
            self.witness_failures.append((r.seed, r.witness_error))

    def finalize(self) -> "EquivalenceReport":
        self.mismatches.sort()
        self.witness_failures.sort()
        self.timeouts.sort()
        return self

    def to_text(self) -> str:
        lines = [
            f"reduction: {self.reduction}",
            f"trials: {self.trials}",
            f"agreements: {self.agreements}",
            f"yes_instances: {self.yes_instances}",
            f"mismatches: {len(self.mismatches)}",
        ]
        lines += [f"  seed={s} source={a} target={b} digest={d}" for s, a, b, d in self.mismatches]
        lines.append(f"witness_failures: {len(self.witness_failures)}")
        lines += [f"  seed={s} {msg}" for s, msg in self.witness_failures]
        lines.append(f"timeouts: {len(self.timeouts)}")
        lines += [f"  seed={s}" for s in self.timeouts]
        lines.append("status: " + ("all agree" if self.clean else "MISMATCH"))
        return "\n".join(lines) + "\n"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


DEFAULT_BOUNDS: dict[str, dict[str, Any]] = {
    "thm1": {"k": [2, 3], "class_size": 3},
    "thm2": {"k": [2], "class_size": 3, "fixed_size": True},
    "thm3c": {"n_max": 8, "max_weight": 5},
    "thm3cb": {"n_max": 8, "max_weight": 5},
    "thm4": {"n_max": 7, "k": [1, 2, 3]},
    "thm5": {"k": [2], "class_size": 2},
    "thm6": {"k": [2], "class_size": 2},
}


def _mcc_from_seed(seed: int, b: dict) -> MccInstance:
    rng = XorShift64Star(seed)
    k = rng.choice(list(b["k"]))
    return random_mcc(rng.next_u64(), k, b["class_size"], b.get("edge_prob"),
                      b.get("fixed_size", False))


def _mcc_trial(reduction: str, seed: int, mcc: MccInstance, b: dict) -> TrialResult:
    src_text = format_mcc_text(mcc)
    truth = solve_mcc_bruteforce(mcc) is not None
    res = TrialResult(seed, truth, None, digest(src_text), artifacts={"source.txt": src_text})
    timeout = b.get("timeout", 60.0)
    guard = b.get("guard", True)
    try:
        if reduction == "thm1":
            art = reduce_mcc_weighted_bipartite(mcc)
        elif reduction == "thm2":
            art = reduce_mcc_vertex_cover(mcc, guard=guard)
        elif reduction == "thm5":
            art = reduce_mcc_allowed_kdelta(mcc)
        else:
            art = reduce_mcc_allowed_fvs(mcc, guard=guard)
    except TrivialNoInstance:
        res.target_answer = False
        return res
    inst = art.instance
    res.artifacts["target.json"] = dump_instance(inst)
    try:
        report = solve(inst, timeout=timeout)
        res.target_answer = report is not None and report.optimal_cost <= inst.delta
        if reduction in ("thm5", "thm6"):
            _check_subdivision(art, res, timeout)
    except SolverTimeout:
        res.timed_out = True
        return res
    if res.target_answer:
        extract = extract_clique_weighted if reduction in ("thm1", "thm5") else extract_clique_vertex_cover
        try:
            clique = extract(art, report.clustering)
            if not is_multicolored_clique(mcc if art.source is None else art.source, clique):
                res.witness_error = f"extracted {sorted(clique)} is not a multicolored clique"
            elif reduction == "thm1" and report.optimal_cost != inst.delta:
                res.witness_error = f"optimum {report.optimal_cost} differs from budget {inst.delta}"
        except ExtractionError as exc:
            res.witness_error = str(exc)
    return res


def _check_subdivision(art: ReductionArtifact, res: TrialResult, timeout: float) -> None:
    """Distances between pre-image points survive; the weighted pre-image decides alike."""
    n0 = art.meta["weighted_points"]
    unit_d = art.instance.metric.dist[:n0, :n0]
    if art.meta["reduction"] == "thm5":
        pre = reduce_mcc_weighted_bipartite(art.source)
    else:
        pre = reduce_mcc_vertex_cover(art.source, guard=art.meta["guard"])
        anchors = art.meta["anchor_plus"] + art.meta["anchor_minus"]
        if not is_forest_without(art.instance.graph, anchors):
            res.witness_error = "anchor set is not a feedback vertex set"
    if not (unit_d == pre.instance.metric.dist).all():
        res.witness_error = "subdivision changed a distance between original points"
    pre_allowed = MsrInstance(pre.instance.metric, pre.instance.k, pre.instance.delta,
                              Variant.ALLOWED, art.instance.allowed, pre.instance.graph)
    if decide(pre_allowed, timeout=timeout) != res.target_answer:
        res.witness_error = "unit instance and weighted pre-image decide differently"


def _augment_trial(reduction: str, seed: int, inst: MsrInstance, b: dict) -> TrialResult:
    timeout = b.get("timeout", 60.0)
    src_text = dump_instance(inst)
    res = TrialResult(seed, None, None, digest(src_text), artifacts={"source.json": src_text})
    try:
        res.source_answer = decide(inst, timeout=timeout)
        aug = augment_complete(inst) if reduction == "thm3c" else augment_complete_bipartite(inst)
        res.artifacts["target.json"] = dump_instance(aug)
        report = solve(aug, timeout=timeout)
    except SolverTimeout:
        res.timed_out = True
        return res
    res.target_answer = report is not None and report.optimal_cost <= inst.delta
    g = aug.graph
    if reduction == "thm3c":
        shape_ok = g.m == g.n * (g.n - 1) // 2
    else:
        sides = is_bipartite(inst.graph)
        shape_ok = is_bipartite(g) is not None and g.m == len(sides[0]) * len(sides[1])
    if not shape_ok:
        res.witness_error = "augmented graph has the wrong shape"
    elif res.target_answer and not verify_clustering(inst, report.clustering):
        res.witness_error = "augmented clustering is not valid on the original metric"
    return res


def _augment_source(reduction: str, seed: int, b: dict) -> MsrInstance:
    """Random small instance with budget at its optimum or one below.

    Every fourth seed instead uses a weighted bipartite clique gadget built
    from a random two-class source.
    """
    rng = XorShift64Star(seed)
    if rng.below(4) == 3:
        while True:
            try:
                art = reduce_mcc_weighted_bipartite(random_mcc(rng.next_u64(), 2, 2))
                break
            except TrivialNoInstance:
                continue
        inst = art.instance
        return inst.with_delta(inst.delta - rng.below(2))
    sub = rng.next_u64()
    if reduction == "thm3cb":
        n = rng.between(2, b["n_max"])
        w = 1 if rng.below(2) == 0 else b["max_weight"]
        g = random_bipartite_graph(sub, n, 0.3 + 0.6 * rng.random(), w)
        variant = rng.choice(list(Variant))
        allowed = None
        if variant is Variant.ALLOWED:
            allowed = [v for v in range(n) if rng.chance(0.5)] or [0]
        inst = MsrInstance.from_graph(g, rng.between(1, 3), None, variant, allowed)
    else:
        inst = random_instance(sub, b["n_max"], b["max_weight"])
    opt = solve(inst)
    if opt is None:
        return inst.with_delta(rng.below(5))
    return inst.with_delta(max(0, opt.optimal_cost - rng.below(2)))


def _ds_trial(seed: int, ds: DsInstance, b: dict) -> TrialResult:
    src_text = format_ds_text(ds)
    truth = solve_ds_bruteforce(ds.graph, ds.k)
    res = TrialResult(seed, truth is not None, None, digest(src_text),
                      artifacts={"source.txt": src_text})
    inst = reduce_ds_to_exact(ds)
    res.artifacts["target.json"] = dump_instance(inst)
    try:
        report = solve(inst, timeout=b.get("timeout", 60.0))
    except SolverTimeout:
        res.timed_out = True
        return res
    res.target_answer = report is not None and report.optimal_cost <= inst.delta
    if res.target_answer:
        centers = report.clustering.centers
        if len(centers) > ds.k or not is_dominating_set(ds.graph, centers):
            res.witness_error = f"centers {centers} do not dominate within k={ds.k}"
    return res


def _ds_source(seed: int, b: dict) -> DsInstance:
    rng = XorShift64Star(seed)
    n = rng.between(2, b["n_max"])
    g = random_bipartite_graph(rng.next_u64(), n, 0.3 + 0.6 * rng.random())
    return DsInstance(g, rng.choice(list(b["k"])))


def run_trial(job: tuple) -> TrialResult:
    """One fuzz trial; ``job`` is ``(reduction, seed, bounds, source-or-None)``."""
    reduction, seed, b, source = job
    if reduction in ("thm1", "thm2", "thm5", "thm6"):
        mcc = source if source is not None else _mcc_from_seed(seed, b)
        return _mcc_trial(reduction, seed, mcc, b)
    if reduction in ("thm3c", "thm3cb"):
        inst = source if source is not None else _augment_source(reduction, seed, b)
        return _augment_trial(reduction, seed, inst, b)
    if reduction == "thm4":
        ds = source if source is not None else _ds_source(seed, b)
        return _ds_trial(seed, ds, b)
    raise ValueError(f"unknown reduction {reduction!r}")


def exhaustive_sources(reduction: str, b: dict) -> list:
    if reduction in ("thm1", "thm2", "thm5", "thm6"):
        return list(all_small_mcc(2, b.get("exhaustive_class", 2)))
    if reduction == "thm4":
        return [DsInstance(g, k) for g in ds_source_graphs(b["n_max"]) for k in b["k"]]
    raise ValueError(f"no exhaustive family for {reduction}")


def fuzz_equivalence(reduction: str, trials: int = 100, bounds: Optional[dict] = None,
                     seed: int = 0, exhaustive: bool = False, threads: int = 1,
                     artifact_dir: Optional[os.PathLike] = None) -> EquivalenceReport:
    """Compare source and target answers trial by trial.

    Exhaustive mode walks the whole small family instead of sampling; the
    trial "seed" is then the family index. Mismatching pairs are written to
    ``artifact_dir`` when given.
    """
    if reduction not in DEFAULT_BOUNDS:
        raise ValueError(f"unknown reduction {reduction!r}")
    b = dict(DEFAULT_BOUNDS[reduction], **(bounds or {}))
    if exhaustive:
        jobs = [(reduction, i, b, src) for i, src in enumerate(exhaustive_sources(reduction, b))]
    else:
        jobs = [(reduction, trial_seed(seed, i), b, None) for i in range(trials)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_trial, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        results = [run_trial(j) for j in jobs]
    report = EquivalenceReport(reduction)
    for r in results:
        report.add(r)
        if artifact_dir is not None and (not r.agrees or r.witness_error):
            out = Path(artifact_dir)
            out.mkdir(parents=True, exist_ok=True)
            for name, text in r.artifacts.items():
                (out / f"{reduction}-{r.seed}-{name}").write_text(text)
    return report.finalize()
