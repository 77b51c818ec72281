from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msrkit.errors import InstanceError, SizeCapError, SolverTimeout
from msrkit.graph import build_graph, shortest_path_metric
from msrkit.harness import atlas_graphs, random_graph, random_instance
from msrkit.solvers import (
    Clustering,
    MsrInstance,
    Variant,
    choose_algorithm,
    decide,
    optimal_radii_for_centers,
    solve,
    solve_branch_bound,
    solve_cover_dp,
    solve_enumerate,
    verify_clustering,
)

SOLVERS = [solve_cover_dp, solve_branch_bound, solve_enumerate]


def path(n, w=1):
    return build_graph(n, [(i, i + 1, w) for i in range(n - 1)])


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def brute_force_cost(inst):
    """Every center set, every integer radius up to the diameter; no shared code."""
    d = inst.metric.dist
    n = inst.n
    top = int(d.max())
    centers = inst.eligible_centers()
    sizes = [inst.k] if inst.exact else range(1, inst.k + 1)
    best = None
    for s in sizes:
        for cs in combinations(centers, s):
            for radii in product(range(top + 1), repeat=s):
                cost = sum(radii)
                if best is not None and cost >= best:
                    continue
                covered = np.zeros(n, dtype=bool)
                ok = True
                for c, r in zip(cs, radii):
                    inside = d[c] <= r
                    if inst.exact and inside.sum() < 2:
                        ok = False
                        break
                    covered |= inside
                if ok and covered.all():
                    best = cost
    return best


@pytest.mark.parametrize("solver", SOLVERS)
def test_path_k1(solver):
    rep = solver(MsrInstance.from_graph(path(3), 1))
    assert rep.optimal_cost == 1 and rep.clustering.pairs == ((1, 1),)


@pytest.mark.parametrize("solver", SOLVERS)
def test_cycle_standard_and_exact(solver):
    assert solver(MsrInstance.from_graph(cycle(4), 2)).optimal_cost == 1
    rep = solver(MsrInstance.from_graph(cycle(4), 2, variant="exact"))
    assert rep.optimal_cost == 2
    assert all(r == 1 for _, r in rep.clustering.pairs)


@pytest.mark.parametrize("solver", SOLVERS)
def test_star_and_allowed(solver):
    star = build_graph(5, [(0, i) for i in range(1, 5)])
    assert solver(MsrInstance.from_graph(star, 2)).optimal_cost == 1
    rep = solver(MsrInstance.from_graph(path(3), 1, variant="allowed", allowed=[0]))
    assert rep.optimal_cost == 2 and rep.clustering.pairs == ((0, 2),)


def test_optimal_radii_for_centers():
    m = shortest_path_metric(path(4))
    # (1, 1) and (0, 2) both cost 2; the lexicographically smaller radii win
    assert optimal_radii_for_centers(m, [1, 2]) == ((0, 2), 2)
    assert verify_clustering(MsrInstance(m, 2), Clustering(((1, 1), (2, 1)))).valid
    assert optimal_radii_for_centers(m, [0]) == ((3,), 3)
    assert optimal_radii_for_centers(m, [0, 1, 2, 3]) == ((0, 0, 0, 0), 0)
    assert optimal_radii_for_centers(m, [0], delta=2) is None
    assert optimal_radii_for_centers(m, [0, 1, 2, 3], nonzero=True) == ((1, 1, 1, 1), 4)


def test_verify_reasons():
    inst = MsrInstance.from_graph(path(3), 1)
    assert verify_clustering(inst, Clustering(((1, 1),))).valid
    v = verify_clustering(inst, Clustering(((0, 1),)))
    assert v.reason == "uncovered" and "2" in v.detail
    assert verify_clustering(inst, Clustering(((0, 1), (2, 0)))).reason == "too-many-pairs"
    assert verify_clustering(inst, Clustering(())).reason == "empty"
    assert verify_clustering(inst, Clustering(((5, 1),))).reason == "out-of-range"
    assert verify_clustering(inst, Clustering(((1, -1),))).reason == "negative-radius"
    two = MsrInstance.from_graph(path(3), 2)
    assert verify_clustering(two, Clustering(((1, 1), (1, 0)))).reason == "duplicate-center"
    assert verify_clustering(inst.with_delta(0), Clustering(((1, 1),))).reason == "over-budget"
    ex = MsrInstance.from_graph(path(3), 2, variant="exact")
    assert verify_clustering(ex, Clustering(((0, 0), (1, 1)))).reason == "singleton-ball"
    assert verify_clustering(ex, Clustering(((1, 1),))).reason == "wrong-pair-count"
    al = MsrInstance.from_graph(path(3), 1, variant="allowed", allowed=[0])
    assert verify_clustering(al, Clustering(((1, 1),))).reason == "center-not-allowed"


def test_decide_examples():
    inst = MsrInstance.from_graph(path(3), 1)
    assert decide(inst.with_delta(1))
    assert not decide(inst.with_delta(0))
    with pytest.raises(InstanceError):
        decide(inst)


def test_instance_validation():
    g = path(3)
    with pytest.raises(InstanceError):
        MsrInstance.from_graph(g, 0)
    with pytest.raises(InstanceError):
        MsrInstance.from_graph(g, 1, -1)
    with pytest.raises(InstanceError):
        MsrInstance.from_graph(g, 1, variant="allowed")
    with pytest.raises(InstanceError):
        MsrInstance.from_graph(g, 1, variant="allowed", allowed=[3])
    with pytest.raises(InstanceError):
        MsrInstance.from_graph(g, 1, allowed=[0])


@pytest.mark.parametrize("solver", SOLVERS)
def test_exact_infeasible(solver):
    assert solver(MsrInstance.from_graph(path(3), 4, variant="exact")) is None
    assert solver(MsrInstance.from_graph(build_graph(1, []), 1, variant="exact")) is None


def test_single_point():
    inst = MsrInstance.from_graph(build_graph(1, []), 3)
    for solver in SOLVERS:
        rep = solver(inst)
        assert rep.optimal_cost == 0 and rep.clustering.pairs == ((0, 0),)


def test_merge_duplicates_never_hurts():
    m = MsrInstance.from_graph(path(5), 3)
    raw = Clustering(((2, 1), (2, 2), (0, 0)))
    merged = raw.merged()
    assert merged.cost <= raw.cost
    assert merged.pairs == ((0, 0), (2, 2))
    assert verify_clustering(m, merged).valid


@pytest.mark.parametrize("seed", range(60))
def test_against_brute_force(seed):
    inst = random_instance(seed, n_max=5, max_weight=3)
    truth = brute_force_cost(inst)
    for solver in SOLVERS:
        rep = solver(inst)
        assert (rep is None) == (truth is None)
        if rep is not None:
            assert rep.optimal_cost == truth
            assert verify_clustering(inst, rep.clustering).valid


def test_enumerate_agrees_with_dp_on_all_small_unit_graphs():
    for g in atlas_graphs(6):
        for k in (1, 2):
            inst = MsrInstance.from_graph(g, k)
            assert solve_enumerate(inst).optimal_cost == solve_cover_dp(inst).optimal_cost


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32))
def test_monotone_in_k_and_exact_dominates(seed):
    base = random_instance(seed, n_max=7, variants=(Variant.STANDARD,))
    g = base.graph
    costs = [solve_cover_dp(MsrInstance.from_graph(g, k)).optimal_cost for k in (1, 2, 3)]
    assert costs[0] >= costs[1] >= costs[2]
    for k in (1, 2, 3):
        ex = solve_cover_dp(MsrInstance.from_graph(g, k, variant="exact"))
        if ex is not None:
            assert ex.optimal_cost >= costs[k - 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_budget_pruning_is_sound(seed):
    inst = random_instance(seed)
    opt = solve(inst)
    if opt is None:
        return
    for delta in (opt.optimal_cost, max(0, opt.optimal_cost - 1)):
        probe = inst.with_delta(delta)
        for algo in ("dp", "bb", "enum"):
            assert decide(probe, True, algo) == decide(probe, False, algo)


def test_dp_size_cap():
    with pytest.raises(SizeCapError):
        solve_cover_dp(MsrInstance.from_graph(path(23), 2))


def test_timeout_is_distinct_from_infeasible():
    g = random_graph(7, 60, 0.08, 9)
    inst = MsrInstance.from_graph(g, 4)
    with pytest.raises(SolverTimeout):
        solve_branch_bound(inst, timeout=0.0)
    with pytest.raises(SolverTimeout):
        solve_enumerate(inst, timeout=0.0)


def test_dispatch():
    assert choose_algorithm(MsrInstance.from_graph(path(10), 2)) == "dp"
    big = MsrInstance.from_graph(path(40), 2)
    assert choose_algorithm(big) == "enum"
    assert solve(big).optimal_cost == solve_branch_bound(big).optimal_cost == 19


def test_deterministic_witness():
    inst = random_instance(11, n_max=8)
    a, b = solve(inst), solve(inst)
    assert a.clustering == b.clustering
