"""Exact Min-Sum-Radii solving for the standard, exact and allowed-centers variants.

Three independent algorithms share only the instance model:

* :func:`solve_cover_dp` -- subset-cover table over ball bitmasks (n <= 22);
* :func:`solve_branch_bound` -- radius-raising search from uncovered points;
* :func:`solve_enumerate` -- guess the centers, then search their radii.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from ._backend import INF, kernels
from .errors import InstanceError, SizeCapError, SolverTimeout
from .graph import MetricSpace, WeightedGraph, candidate_radii, shortest_path_metric

DP_CAP = 22
DP_MEMORY_CAP = 1 << 28  # table entries
ENUM_LIMIT = 3000  # center sets tried by the auto dispatcher
DEFAULT_TIMEOUT = 60.0


class Variant(str, enum.Enum):
    STANDARD = "standard"
    EXACT = "exact"
    ALLOWED = "allowed"


@dataclass(frozen=True, eq=False)
class MsrInstance:
    """A metric, a cluster bound ``k``, an optional budget and a variant.

    ``graph`` is kept when the metric came from a graph so the instance can
    be written back out.
    """

    metric: MetricSpace
    k: int
    delta: Optional[int] = None
    variant: Variant = Variant.STANDARD
    allowed: Optional[frozenset[int]] = None
    graph: Optional[WeightedGraph] = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise InstanceError(f"k must be an integer >= 1, got {self.k!r}")
        if self.delta is not None:
            if isinstance(self.delta, bool) or not isinstance(self.delta, (int, np.integer)) or self.delta < 0:
                raise InstanceError(f"delta must be a non-negative integer, got {self.delta!r}")
        if self.variant is Variant.ALLOWED:
            if not self.allowed:
                raise InstanceError("allowed-centers variant needs a nonempty center set")
            allowed = frozenset(int(a) for a in self.allowed)
            if min(allowed) < 0 or max(allowed) >= self.metric.n:
                raise InstanceError("allowed centers out of range")
            object.__setattr__(self, "allowed", allowed)
        elif self.allowed is not None:
            raise InstanceError("allowed centers given for a non-allowed variant")

    @classmethod
    def from_graph(cls, g: WeightedGraph, k: int, delta: Optional[int] = None,
                   variant: Variant | str = Variant.STANDARD,
                   allowed: Optional[Iterable[int]] = None) -> "MsrInstance":
        metric = shortest_path_metric(g, allow_disconnected=True)
        return cls(metric, k, delta, Variant(variant),
                   frozenset(allowed) if allowed is not None else None, g)

    @property
    def n(self) -> int:
        return self.metric.n

    @property
    def exact(self) -> bool:
        return self.variant is Variant.EXACT

    def eligible_centers(self) -> list[int]:
        if self.variant is Variant.ALLOWED:
            return sorted(self.allowed)
        return list(range(self.n))

    def with_delta(self, delta: Optional[int]) -> "MsrInstance":
        return MsrInstance(self.metric, self.k, delta, self.variant, self.allowed, self.graph)


@dataclass(frozen=True)
class Clustering:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted((int(c), int(r)) for c, r in self.pairs)))

    @property
    def cost(self) -> int:
        return sum(r for _, r in self.pairs)

    @property
    def centers(self) -> list[int]:
        return [c for c, _ in self.pairs]

    def radius_of(self, c: int) -> int:
        for cc, r in self.pairs:
            if cc == c:
                return r
        raise KeyError(c)

    def merged(self) -> "Clustering":
        """Collapse pairs sharing a center into one pair at the largest radius."""
        best: dict[int, int] = {}
        for c, r in self.pairs:
            best[c] = max(r, best.get(c, r))
        return Clustering(tuple(best.items()))

    def __str__(self):
        return " ".join(f"({c},{r})" for c, r in self.pairs)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str
    detail: str = ""

    def __bool__(self):
        return self.valid


@dataclass
class SolveReport:
    optimal_cost: int
    clustering: Clustering
    algorithm: str
    nodes_explored: int = 0
    elapsed: float = 0.0


def verify_clustering(inst: MsrInstance, c: Clustering) -> Verdict:
    n = inst.n
    pairs = c.pairs
    if not pairs:
        return Verdict(False, "empty", "no center-radius pairs")
    for center, r in pairs:
        if not 0 <= center < n:
            return Verdict(False, "out-of-range", f"center {center} not in 0..{n - 1}")
        if r < 0:
            return Verdict(False, "negative-radius", f"center {center} has radius {r}")
    centers = [cc for cc, _ in pairs]
    if len(set(centers)) != len(centers):
        return Verdict(False, "duplicate-center", "centers must be pairwise distinct")
    if inst.exact:
        if len(pairs) != inst.k:
            return Verdict(False, "wrong-pair-count", f"{len(pairs)} pairs, need exactly {inst.k}")
    elif len(pairs) > inst.k:
        return Verdict(False, "too-many-pairs", f"{len(pairs)} pairs, at most {inst.k}")
    if inst.variant is Variant.ALLOWED:
        bad = [cc for cc in centers if cc not in inst.allowed]
        if bad:
            return Verdict(False, "center-not-allowed", f"centers {bad} not in the allowed set")
    dist = inst.metric.dist
    covered = np.zeros(n, dtype=bool)
    for center, r in pairs:
        inside = dist[center] <= r
        if inst.exact and int(inside.sum()) < 2:
            return Verdict(False, "singleton-ball", f"ball at {center} covers fewer than two points")
        covered |= inside
    if not covered.all():
        missing = np.flatnonzero(~covered).tolist()
        return Verdict(False, "uncovered", f"uncovered points {missing}")
    if inst.delta is not None and c.cost > inst.delta:
        return Verdict(False, "over-budget", f"cost {c.cost} exceeds delta {inst.delta}")
    return Verdict(True, "ok")


def _finish(inst: MsrInstance, pairs, algorithm: str, nodes: int, t0: float) -> Optional[SolveReport]:
    cl = Clustering(tuple(pairs))
    if inst.delta is not None and cl.cost > inst.delta:
        return None
    return SolveReport(cl.cost, cl, algorithm, nodes, time.perf_counter() - t0)


# ---------------------------------------------------------------- cover DP

def _ball_system(inst: MsrInstance, budget: Optional[int]):
    """``(center, radius, mask)`` for every candidate ball, by center then radius."""
    dist = inst.metric.dist
    weights = 1 << np.arange(inst.n, dtype=np.uint64)
    balls = []
    for c in inst.eligible_centers():
        for r in candidate_radii(inst.metric, c, budget):
            inside = dist[c] <= r
            if inst.exact and int(inside.sum()) < 2:
                continue
            balls.append((c, r, int(weights[inside].sum())))
    return balls


def solve_cover_dp(inst: MsrInstance, prune_radii: bool = True, cap: int = DP_CAP) -> Optional[SolveReport]:
    """Minimum-cost cover of all points by at most (exactly) ``k`` balls.

    Returns ``None`` when no clustering exists (or none within ``delta``).
    """
    t0 = time.perf_counter()
    n = inst.n
    if n > cap:
        raise SizeCapError(f"cover DP supports n <= {cap}, got {n}")
    if inst.exact and (n < 2 or inst.k > n):
        return None
    budget = inst.delta if prune_radii else None
    balls = _ball_system(inst, budget)
    full = (1 << n) - 1
    if inst.exact:
        return _exact_dp(inst, balls, full, t0)

    # same set at several (center, radius): keep the cheapest, then lowest center
    cheapest: dict[int, tuple[int, int]] = {}
    for c, r, mask in balls:
        if mask not in cheapest or (r, c) < cheapest[mask]:
            cheapest[mask] = (r, c)
    items = sorted((c, r, mask) for mask, (r, c) in cheapest.items())
    layers = min(inst.k, n)
    if (layers + 1) << n > DP_MEMORY_CAP:
        raise SizeCapError("cover DP table exceeds the memory cap")
    masks = np.array([m for _, _, m in items], dtype=np.uint64)
    costs = np.array([r for _, r, _ in items], dtype=np.int64)
    per_point = [[] for _ in range(n)]
    for idx, (_, _, m) in enumerate(items):
        for p in range(n):
            if m >> p & 1:
                per_point[p].append(idx)
    point_ptr = np.zeros(n + 1, dtype=np.int64)
    point_ptr[1:] = np.cumsum([len(x) for x in per_point])
    point_balls = np.array([i for x in per_point for i in x], dtype=np.int64)
    f = kernels.cover_layers(masks, costs, point_ptr, point_balls, n, layers)
    if f[layers, full] >= INF:
        return None

    pairs = []
    t, s = layers, full
    while s:
        if f[t - 1, s] == f[t, s]:
            t -= 1
            continue
        target = f[t, s]
        for idx, (c, r, m) in enumerate(items):
            rest = f[t - 1, s & ~m]
            if rest < INF and r + rest == target:
                pairs.append((c, r))
                s &= ~m
                t -= 1
                break
        else:  # pragma: no cover - table is self-consistent
            raise AssertionError("cover DP reconstruction failed")
    merged = Clustering(tuple(pairs)).merged().pairs
    return _finish(inst, merged, "dp", (layers + 1) << n, t0)


def _exact_dp(inst: MsrInstance, balls, full: int, t0: float) -> Optional[SolveReport]:
    n, k = inst.n, inst.k
    groups: dict[int, list[tuple[int, int]]] = {}
    for c, r, mask in balls:
        groups.setdefault(c, []).append((r, mask))
    centers = sorted(groups)
    if k > len(centers):
        return None
    if len(centers) * (k + 1) << n > DP_MEMORY_CAP:
        raise SizeCapError("exact cover DP table exceeds the memory cap")
    flat = [(c, r, m) for c in centers for r, m in groups[c]]
    group_ptr = np.zeros(len(centers) + 1, dtype=np.int64)
    group_ptr[1:] = np.cumsum([len(groups[c]) for c in centers])
    masks = np.array([m for _, _, m in flat], dtype=np.uint64)
    costs = np.array([r for _, r, _ in flat], dtype=np.int64)
    f, choice = kernels.group_cover(masks, costs, group_ptr, n, k)
    if f[k, full] >= INF:
        return None
    pairs = []
    t, s = k, full
    for g in range(len(centers) - 1, -1, -1):
        pick = int(choice[g, t, s])
        if pick:
            c, r, m = flat[group_ptr[g] + pick - 1]
            pairs.append((c, r))
            s &= ~m
            t -= 1
    if t or s:  # pragma: no cover
        raise AssertionError("exact cover DP reconstruction failed")
    return _finish(inst, pairs, "dp", len(centers) * (k + 1) << n, t0)


# ------------------------------------------------------- branch and bound

class _Clock:
    def __init__(self, timeout: Optional[float]):
        self.deadline = None if timeout is None else time.perf_counter() + timeout
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.deadline is not None and self.ticks % 256 == 0 and time.perf_counter() > self.deadline:
            raise SolverTimeout(f"solver exceeded its time budget after {self.ticks} nodes")


def _floors(inst: MsrInstance) -> np.ndarray:
    """Smallest admissible radius per point used as a center."""
    if inst.exact:
        return inst.metric.nearest_other
    return np.zeros(inst.n, dtype=np.int64)


def _greedy_incumbent(inst: MsrInstance) -> Optional[list[tuple[int, int]]]:
    if inst.exact:
        return None
    ecc = inst.metric.dist.max(axis=1)
    cands = [(int(ecc[c]), c) for c in inst.eligible_centers() if ecc[c] < INF]
    if not cands:
        return None
    r, c = min(cands)
    return [(c, r)]


def solve_branch_bound(inst: MsrInstance, prune_radii: bool = True,
                       timeout: Optional[float] = DEFAULT_TIMEOUT) -> Optional[SolveReport]:
    """Depth-first search that raises one radius per step.

    Each node takes the lowest-index uncovered point and branches over the
    centers that could reach it: raise a used center's radius to the
    point's distance, or open a new center there.
    """
    t0 = time.perf_counter()
    clock = _Clock(timeout)
    n, k = inst.n, inst.k
    dist = inst.metric.dist
    eligible = np.array(inst.eligible_centers(), dtype=np.int64)
    floors = _floors(inst)
    if inst.exact and (n < 2 or k > n):
        return None
    dsub = dist[eligible]  # rows: eligible centers
    cap_radius = inst.delta if (prune_radii and inst.delta is not None) else None

    best_pairs = None
    if prune_radii and inst.delta is not None:
        target = inst.delta + 1
    else:
        target = INF
        inc = _greedy_incumbent(inst)
        if inc is not None:
            best_pairs, target = inc, inc[0][1]

    def fill_cost(radii: dict[int, int]) -> int:
        need = k - len(radii) if inst.exact else 0
        if need <= 0:
            return 0
        free = sorted(int(floors[c]) for c in eligible if int(c) not in radii)
        if len(free) < need or free[need - 1] >= INF:
            return INF
        return sum(free[:need])

    seen = set()
    stack = [{}]
    while stack:
        clock.tick()
        radii = stack.pop()
        key = tuple(sorted(radii.items()))
        if key in seen:
            continue
        seen.add(key)
        cost = sum(radii.values())
        covered = np.zeros(n, dtype=bool)
        for c, r in radii.items():
            covered |= dist[c] <= r
        if covered.all():
            total = cost + fill_cost(radii)
            if total < target:
                target = total
                pairs = list(radii.items())
                if inst.exact and len(pairs) < k:
                    free = sorted((int(floors[c]), int(c)) for c in eligible if int(c) not in radii)
                    pairs += [(c, f) for f, c in free[:k - len(pairs)]]
                best_pairs = pairs
            continue
        slack = target - 1 - cost
        if slack < 0:
            continue
        unc = np.flatnonzero(~covered)
        # increment matrix: rows eligible centers, cols uncovered points
        cur = np.array([radii.get(int(c), -1) for c in eligible], dtype=np.int64)
        d = dsub[:, unc]
        used = cur >= 0
        newrad = np.where(used[:, None], d, np.maximum(d, floors[eligible][:, None]))
        incr = np.maximum(newrad - np.maximum(cur, 0)[:, None], 0)
        incr[d >= INF] = INF
        if len(radii) >= k:
            incr[~used] = INF
        if cap_radius is not None:
            incr[newrad > cap_radius] = INF
        reach = incr <= slack
        if not reach.any(axis=0).all():
            continue
        col_min = np.where(reach, incr, INF).min(axis=0)
        lb = int(col_min.max())
        single = reach.sum(axis=0) == 1
        if single.any():
            rows = reach[:, single].argmax(axis=0)
            forced = {}
            for row, val in zip(rows.tolist(), col_min[single].tolist()):
                forced[row] = max(forced.get(row, 0), val)
            new_forced = sum(1 for row in forced if not used[row])
            if len(radii) + new_forced > k:
                continue
            lb = max(lb, sum(forced.values()))
        if inst.exact and len(radii) < k:
            free = np.sort(floors[eligible][~used])
            need = k - len(radii)
            if len(free) < need or free[need - 1] >= INF:
                continue
            lb = max(lb, int(free[:need].sum()))
        if lb > slack:
            continue
        p = int(unc[0])
        options = []
        for row in np.flatnonzero(reach[:, 0]).tolist():
            c = int(eligible[row])
            newr = int(dist[c, p]) if used[row] else int(max(dist[c, p], floors[c]))
            options.append((int(incr[row, 0]), c, newr))
        options.sort(reverse=True)
        for _, c, newr in options:
            child = dict(radii)
            child[c] = newr
            stack.append(child)
    if best_pairs is None:
        return None
    return _finish(inst, best_pairs, "bb", clock.ticks, t0)


# ------------------------------------------------------------- enumeration

def optimal_radii_for_centers(m: MetricSpace, centers: Sequence[int], k_exact: bool = False,
                              delta: Optional[int] = None, nonzero: bool = False,
                              bound: Optional[int] = None, clock: Optional[_Clock] = None
                              ) -> Optional[tuple[tuple[int, ...], int]]:
    """Cheapest radius vector for fixed ``centers`` covering every point.

    Radii range over distances from each center (capped at ``delta``); with
    ``nonzero`` every ball must contain a second point. Only solutions
    cheaper than ``bound`` are reported. ``k_exact`` keeps one pair per
    given center even at radius zero (always the case here; the flag is
    recorded for callers that report exact-count clusterings).
    """
    del k_exact  # every center always receives a radius
    centers = list(centers)
    if not centers:
        raise ValueError("need at least one center")
    dist = m.dist
    q = len(centers)
    floors = [int(m.nearest_other[c]) if nonzero else 0 for c in centers]
    if any(f >= INF for f in floors):
        return None
    limit = INF if bound is None else bound - 1
    if delta is not None:
        limit = min(limit, delta)
    rows = dist[centers]
    best: list = [None, limit + 1 if limit < INF else INF]

    def rest_bound(j: int, unc: np.ndarray, slack: int) -> int:
        """Lower bound on the radii of centers j.. given uncovered points."""
        floor_sum = sum(floors[j:])
        if not unc.size:
            return floor_sum
        d = rows[j:, unc]
        reach = d <= slack
        if not reach.any(axis=0).all():
            return INF
        mins = np.where(reach, d, INF).min(axis=0)
        lb = int(mins.max())
        need = [floors[j + i] for i in range(q - j)]
        single = reach.sum(axis=0) == 1
        if single.any():
            owner = reach[:, single].argmax(axis=0)
            for o, val in zip(owner.tolist(), mins[single].tolist()):
                need[o] = max(need[o], val)
        return max(lb, sum(need), floor_sum)

    def search(j: int, covered: np.ndarray, cost: int, radii: list[int]):
        if clock is not None:
            clock.tick()
        unc = np.flatnonzero(~covered)
        row = rows[j]
        if j == q - 1:
            r = floors[j]
            if unc.size:
                r = max(r, int(row[unc].max()))
            if r < INF and cost + r < best[1] and cost + r <= limit:
                best[0], best[1] = tuple(radii + [r]), cost + r
            return
        vals = {floors[j]}
        if unc.size:
            du = row[unc]
            vals.update(int(x) for x in np.unique(du[(du >= floors[j]) & (du < INF)]))
        for r in sorted(vals):
            slack = min(best[1] - 1, limit) - cost - r
            if slack < 0:
                break
            inside = covered | (row <= r)
            rest_unc = np.flatnonzero(~inside)
            if rest_bound(j + 1, rest_unc, slack) > slack:
                continue
            search(j + 1, inside, cost + r, radii + [r])

    search(0, np.zeros(m.n, dtype=bool), 0, [])
    if best[0] is None:
        return None
    return best[0], best[1]


def solve_enumerate(inst: MsrInstance, prune_radii: bool = True,
                    timeout: Optional[float] = DEFAULT_TIMEOUT) -> Optional[SolveReport]:
    """Try every center set (size exactly ``k`` for the exact variant)."""
    t0 = time.perf_counter()
    clock = _Clock(timeout)
    eligible = inst.eligible_centers()
    k = inst.k
    if inst.exact:
        if inst.n < 2 or k > len(eligible):
            return None
        sizes = [k]
    else:
        sizes = range(1, min(k, len(eligible)) + 1)
    delta = inst.delta if prune_radii else None
    best_cost, best_pairs = None, None
    for size in sizes:
        for centers in combinations(eligible, size):
            res = optimal_radii_for_centers(inst.metric, centers, inst.exact, delta,
                                            nonzero=inst.exact, bound=best_cost, clock=clock)
            if res is not None:
                best_cost, best_pairs = res[1], list(zip(centers, res[0]))
    if best_pairs is None:
        return None
    return _finish(inst, best_pairs, "enum", clock.ticks, t0)


# ---------------------------------------------------------------- dispatch

ALGORITHMS = {"dp": solve_cover_dp, "bb": solve_branch_bound, "enum": solve_enumerate}


def choose_algorithm(inst: MsrInstance) -> str:
    n = inst.n
    if n <= DP_CAP:
        if inst.exact:
            if n * (inst.k + 1) << n <= DP_MEMORY_CAP:
                return "dp"
        elif (min(inst.k, n) + 1) << n <= DP_MEMORY_CAP:
            return "dp"
    e = len(inst.eligible_centers())
    if inst.exact:
        sets = math.comb(e, inst.k) if inst.k <= e else 0
    else:
        sets = sum(math.comb(e, s) for s in range(1, min(inst.k, e) + 1))
    return "enum" if sets <= ENUM_LIMIT else "bb"


def solve(inst: MsrInstance, algo: str = "auto", prune_radii: bool = True,
          timeout: Optional[float] = DEFAULT_TIMEOUT) -> Optional[SolveReport]:
    if algo == "auto":
        algo = choose_algorithm(inst)
    if algo == "dp":
        return solve_cover_dp(inst, prune_radii=prune_radii)
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    return ALGORITHMS[algo](inst, prune_radii=prune_radii, timeout=timeout)


def decide(inst: MsrInstance, prune_radii: bool = True, algo: str = "auto",
           timeout: Optional[float] = DEFAULT_TIMEOUT) -> bool:
    """Is there a clustering of cost at most ``inst.delta``?"""
    if inst.delta is None:
        raise InstanceError("decide needs a budget delta")
    rep = solve(inst, algo, prune_radii, timeout)
    return rep is not None and rep.optimal_cost <= inst.delta
