from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonsweep.graph import (
    EdgeKind, Side, build_graph, bulk, edges_in_layer, left, opposite_boundaries,
    right, same_boundary,
)


def kinds(edges):
    return Counter(e.kind for e in edges)


def test_d3_n1_layer_counts():
    g = build_graph(3, 1)
    assert g.num_layers == 2
    for t in (1, 2):
        layer = edges_in_layer(g, t)
        c = kinds(layer)
        assert c[EdgeKind.SPACE_H] == 9 and c[EdgeKind.SPACE_V] == 4
        assert sum(1 for v in g.vertices if v.t == t and not v.is_boundary) == 6
    assert kinds(edges_in_layer(g, 1))[EdgeKind.TIME] == 0
    assert kinds(edges_in_layer(g, 2))[EdgeKind.TIME] == 6
    assert len(edges_in_layer(g, 1)) == 13


def test_d3_n5_totals():
    g = build_graph(3, 5)
    assert g.num_layers == 6
    assert sum(1 for v in g.vertices if not v.is_boundary) == 36
    assert kinds(g.edges)[EdgeKind.TIME] == 30


def test_d5_per_layer_counts():
    g = build_graph(5, 2)
    c = kinds(edges_in_layer(g, 2))
    assert (c[EdgeKind.SPACE_H], c[EdgeKind.SPACE_V], c[EdgeKind.TIME]) == (25, 16, 20)


def test_layer_range():
    g = build_graph(3, 1)
    with pytest.raises(ValueError):
        edges_in_layer(g, 3)
    with pytest.raises(ValueError):
        edges_in_layer(g, 0)


@pytest.mark.parametrize("d, n", [(2, 1), (4, 3), (1, 1), (3, 0)])
def test_rejects_bad_sizes(d, n):
    with pytest.raises(ValueError):
        build_graph(d, n)


def test_boundary_predicates():
    assert opposite_boundaries(left(1, 0), right(4, 2))
    assert same_boundary(left(1, 0), left(9, 2))
    assert not opposite_boundaries(left(1, 0), left(9, 2))
    assert not opposite_boundaries(left(1, 0), bulk(1, 0, 0))
    assert not same_boundary(left(1, 0), bulk(1, 0, 0))
    assert not same_boundary(bulk(1, 0, 0), bulk(1, 0, 0))


def test_integer_predicates_match():
    g = build_graph(3, 4)
    ids = [g.vertex_index(v) for v in (left(1, 0), right(4, 2), left(5, 1), bulk(2, 1, 1))]
    for a in ids:
        for b in ids:
            va, vb = g.vertex(a), g.vertex(b)
            assert g.is_opposite(a, b) == opposite_boundaries(va, vb)
            assert g.is_same_boundary(a, b) == same_boundary(va, vb)


@settings(max_examples=20, deadline=None)
@given(d=st.sampled_from([3, 5, 7]), n=st.integers(1, 6))
def test_structure_invariants(d, n):
    g = build_graph(d, n)
    deg = Counter()
    seen = set()
    for e in g.edges:
        assert e.u != e.v
        key = frozenset((e.u, e.v))
        assert key not in seen
        seen.add(key)
        deg[e.u] += 1
        deg[e.v] += 1
        if e.kind == EdgeKind.TIME:
            assert e.v.t == e.u.t + 1 == e.layer
        else:
            assert e.u.t == e.v.t == e.layer
        if e.kind == EdgeKind.SPACE_H and e.u.is_boundary:
            assert e.u.side == Side.LEFT and e.v.col == 0
        if e.kind == EdgeKind.SPACE_H and e.v.is_boundary:
            assert e.v.side == Side.RIGHT and e.u.col == d - 2
    for v in g.vertices:
        if v.is_boundary:
            assert deg[v] == 1
        else:
            assert 0 <= v.col <= d - 2 and 0 <= v.row <= d - 1
            assert deg[v] <= 6
    # every edge in exactly one layer
    by_layer = [e for t in range(1, n + 2) for e in edges_in_layer(g, t)]
    assert by_layer == g.edges
    assert not any(e.kind == EdgeKind.TIME for e in edges_in_layer(g, 1))


def test_vertex_roundtrip():
    g = build_graph(5, 3)
    for i in range(g.num_vertices):
        assert g.vertex_index(g.vertex(i)) == i


def test_construction_is_deterministic():
    assert build_graph(5, 3).to_json() == build_graph(5, 3).to_json()


def test_edge_index_lookup():
    g = build_graph(3, 2)
    e = g.edge_index(bulk(2, 1, 0), bulk(3, 1, 0))
    assert g.edge(e).kind == EdgeKind.TIME and g.edge(e).layer == 3
    with pytest.raises(ValueError):
        g.edge_index(bulk(1, 0, 0), bulk(1, 2, 1))


def test_json_shape():
    data = build_graph(3, 1).to_json()
    assert set(data) == {"d", "n", "vertices", "edges"}
    assert len(data["edges"]) == 32
    assert set(data["edges"][0]) == {"u", "v", "kind", "layer"}
