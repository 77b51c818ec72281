import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from msrkit._backend import INF
from msrkit.errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphError,
    SelfLoopError,
    SizeCapError,
    VertexRangeError,
    WeightOverflowError,
    ZeroWeightError,
)
from msrkit.graph import (
    ball,
    build_graph,
    candidate_radii,
    format_graph_text,
    is_bipartite,
    parse_graph_text,
    shortest_path_metric,
    subdivide_to_unit,
    subdivide_with_origin,
)
from msrkit.harness import atlas_graphs, random_graph


@pytest.fixture
def path3():
    return shortest_path_metric(build_graph(3, [(0, 1), (1, 2)]))


def scipy_apsp(g):
    rows = [u for u, v, _ in g.edges] + [v for u, v, _ in g.edges]
    cols = [v for u, v, _ in g.edges] + [u for u, v, _ in g.edges]
    data = [w for *_, w in g.edges] * 2
    mat = csr_matrix((data, (rows, cols)), shape=(g.n, g.n))
    return shortest_path(mat, directed=False)


def test_build_graph_flags():
    assert build_graph(3, [(0, 1, 1), (1, 2, 1)]).unit
    g = build_graph(3, [(0, 1, 2), (1, 2, 3)])
    assert not g.unit and g.m == 2
    assert build_graph(2, [(1, 0)]).edges == ((0, 1, 1),)


@pytest.mark.parametrize("n, edges, err", [
    (2, [(0, 0, 1)], SelfLoopError),
    (2, [(0, 1), (1, 0)], DuplicateEdgeError),
    (2, [(0, 1, 0)], ZeroWeightError),
    (2, [(0, 2)], VertexRangeError),
    (3, [(0, 1, 1 << 61), (1, 2, 1 << 61), (0, 2, 1)], WeightOverflowError),
    (2, [(0, 1, 1.5)], GraphError),
    (2, [(0,)], GraphError),
])
def test_build_graph_rejects(n, edges, err):
    with pytest.raises(err):
        build_graph(n, edges)


def test_distinct_error_types():
    kinds = {SelfLoopError, DuplicateEdgeError, ZeroWeightError, VertexRangeError, WeightOverflowError}
    assert len(kinds) == 5 and all(issubclass(k, GraphError) for k in kinds)


def test_metric_examples(path3):
    assert path3.d(0, 2) == 2
    assert shortest_path_metric(build_graph(3, [(0, 1, 2), (1, 2, 3)])).d(0, 2) == 5
    tri = build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 5)])
    assert shortest_path_metric(tri).d(0, 2) == 2


def test_disconnected_metric():
    g = build_graph(3, [(0, 1)])
    with pytest.raises(DisconnectedGraphError):
        shortest_path_metric(g)
    m = shortest_path_metric(g, allow_disconnected=True)
    assert m.d(0, 2) == INF and not m.connected
    assert candidate_radii(m, 2) == [0]


def test_metric_is_read_only(path3):
    with pytest.raises(ValueError):
        path3.dist[0, 1] = 7


def test_ball_examples(path3):
    star = shortest_path_metric(build_graph(4, [(0, 1), (0, 2), (0, 3)]))
    assert ball(star, 0, 1) == {0, 1, 2, 3}
    assert ball(path3, 1, 0) == {1}
    assert ball(path3, 0, 1) == {0, 1}
    with pytest.raises(VertexRangeError):
        ball(path3, 3, 0)


def test_candidate_radii_examples(path3):
    assert candidate_radii(path3, 1) == [0, 1]
    assert candidate_radii(path3, 0) == [0, 1, 2]
    assert candidate_radii(path3, 0, budget=1) == [0, 1]


def test_metric_axioms_on_all_small_connected_graphs():
    # unit atlas graphs up to 7 vertices, then weighted random graphs up to 8
    graphs = list(atlas_graphs(7)) + [random_graph(s, 8, 0.4, 6) for s in range(40)]
    for g in graphs:
        d = shortest_path_metric(g).dist.astype(np.int64)
        assert (np.diag(d) == 0).all()
        assert (d == d.T).all()
        assert (d[:, :, None] <= d[:, None, :] + d.T[None, :, :]).all()


@pytest.mark.parametrize("seed", range(25))
def test_apsp_matches_scipy(seed):
    g = random_graph(seed, 12, 0.3, 1 if seed % 2 else 9)
    ours = shortest_path_metric(g).dist
    assert np.array_equal(ours, scipy_apsp(g).astype(np.int64))


def test_subdivision_examples():
    g = subdivide_to_unit(build_graph(2, [(0, 1, 3)]))
    assert g.n == 4 and g.m == 3 and g.unit
    unit = build_graph(3, [(0, 1), (1, 2)])
    assert subdivide_to_unit(unit).edges == unit.edges
    hexa = subdivide_to_unit(build_graph(3, [(0, 1, 2), (1, 2, 2), (0, 2, 2)]))
    assert hexa.n == 6 and hexa.m == 6 and all(len(a) == 2 for a in hexa.adjacency)


def test_subdivision_origin_and_cap():
    g, origin = subdivide_with_origin(build_graph(3, [(0, 1, 3), (1, 2, 2)]))
    assert origin == [(0, 1, 1), (0, 1, 2), (1, 2, 1)]
    with pytest.raises(SizeCapError):
        subdivide_to_unit(build_graph(2, [(0, 1, 50)]), cap=10)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 7), st.integers(1, 6))
def test_subdivision_preserves_distances(seed, n, w):
    g = random_graph(seed, n, 0.5, w)
    before = shortest_path_metric(g).dist
    after = shortest_path_metric(subdivide_to_unit(g)).dist[:n, :n]
    assert np.array_equal(before, after)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 4))
def test_ball_monotone_and_counts(seed, n, w):
    m = shortest_path_metric(random_graph(seed, n, 0.5, w))
    for c in range(n):
        radii = candidate_radii(m, c)
        balls = [ball(m, c, r) for r in radii]
        assert all(a < b for a, b in zip(balls, balls[1:]))
        assert len(set(balls)) == len(radii)
        assert radii[0] == 0


def test_is_bipartite():
    sides = is_bipartite(build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))
    assert {sides[0], sides[1]} == {frozenset({0, 2}), frozenset({1, 3})}
    assert is_bipartite(build_graph(3, [(0, 1), (1, 2), (0, 2)])) is None


def test_graph_text_roundtrip():
    text = "# comment\n3 2\n0 1 4\n1 2\n"
    g = parse_graph_text(text)
    assert g.edges == ((0, 1, 4), (1, 2, 1))
    assert parse_graph_text(format_graph_text(g)) == g
    unit = build_graph(2, [(0, 1)])
    assert format_graph_text(unit) == "2 1\n0 1\n"


@pytest.mark.parametrize("text", ["", "3 2\n0 1\n", "2 1\n0 x\n", "2 1 5\n0 1\n"])
def test_graph_text_errors(text):
    with pytest.raises(GraphError):
        parse_graph_text(text)


def test_graphs_are_hashable_values():
    a = build_graph(3, [(0, 1), (1, 2)])
    b = build_graph(3, [(1, 2), (0, 1)])
    assert a.n == b.n and sorted(a.edges) == sorted(b.edges)
    assert len({a, build_graph(3, [(0, 1), (1, 2)])}) == 1
    assert sum(len(x) for x in a.adjacency) == 2 * a.m
