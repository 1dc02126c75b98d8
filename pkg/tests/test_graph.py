import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eftol.graph import (
    GraphError,
    build_graph,
    connectivity_oracle_matrix,
    edge_connectivity,
    format_graph,
    independence_number,
    is_connected,
    min_edge_cut,
    min_edge_cut_set,
    parse_graph,
    remove_edges,
)
from eftol.topologies import ary_cube, circulant, hypercube


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@st.composite
def graphs(draw, min_n=2, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return build_graph(n, chosen)


def test_build_triangle():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.degrees == [2, 2, 2]
    assert g.m == 3


def test_build_k2():
    g = build_graph(2, [(0, 1)])
    assert g.degrees == [1, 1]


def test_build_normalizes_and_deduplicates():
    g = build_graph(3, [(1, 0), (0, 1), (2, 1)])
    assert g.edges == ((0, 1), (1, 2))


@pytest.mark.parametrize("pairs", [[(0, 0)], [(0, 4)], [(-1, 2)]])
def test_build_rejects_bad_pairs(pairs):
    with pytest.raises(GraphError, match=r"\("):
        build_graph(4, pairs)


def test_connectivity_examples():
    assert not is_connected(build_graph(4, [(0, 1), (2, 3)]))
    assert is_connected(build_graph(1, []))
    q4 = hypercube(4)
    rng = random.Random(5)
    for _ in range(50):
        assert is_connected(remove_edges(q4, rng.sample(q4.edges, 3)))


def test_fewer_than_n_minus_1_edges_is_disconnected():
    q4 = hypercube(4)
    rng = random.Random(0)
    for _ in range(20):
        h = remove_edges(q4, rng.sample(q4.edges, 18))
        assert h.m == 14
        assert not is_connected(h)


def test_matrix_oracle_examples():
    assert connectivity_oracle_matrix(build_graph(3, [(0, 1), (1, 2)]))
    two_triangles = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not connectivity_oracle_matrix(two_triangles)
    assert connectivity_oracle_matrix(build_graph(2, [(0, 1)]))
    assert not connectivity_oracle_matrix(build_graph(2, []))


def test_matrix_oracle_agrees_on_random_q4_subgraphs():
    q4 = hypercube(4)
    rng = random.Random(11)
    for _ in range(500):
        h = remove_edges(q4, rng.sample(q4.edges, rng.randint(0, 24)))
        assert connectivity_oracle_matrix(h) == is_connected(h)


@settings(max_examples=300, deadline=None)
@given(graphs(max_n=20))
def test_matrix_oracle_agrees_with_search(g):
    assert connectivity_oracle_matrix(g) == is_connected(g)


def test_min_edge_cut_examples():
    c8 = circulant(8, [1])
    assert min_edge_cut(c8, 0, 4) == 2
    assert min_edge_cut(build_graph(2, [(0, 1)]), 0, 1) == 1
    q4 = hypercube(4)
    h = to_nx(q4)
    for u, v in itertools.combinations(range(16), 2):
        assert min_edge_cut(q4, u, v) == 4 == nx.edge_connectivity(h, u, v)
    with pytest.raises(GraphError):
        min_edge_cut(q4, 3, 3)


def test_min_edge_cut_disconnected_is_zero():
    g = build_graph(4, [(0, 1), (2, 3)])
    assert min_edge_cut(g, 0, 3) == 0


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=10), st.data())
def test_min_edge_cut_matches_networkx_and_degree_bound(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
    value = min_edge_cut(g, u, v)
    assert value == nx.edge_connectivity(to_nx(g), u, v)
    assert value <= min(g.degree(u), g.degree(v))
    cut = min_edge_cut_set(g, u, v)
    assert len(cut) == value
    h = remove_edges(g, cut)
    assert not nx.has_path(to_nx(h), u, v)


def test_edge_connectivity_examples():
    assert edge_connectivity(hypercube(4)) == 4
    assert edge_connectivity(ary_cube(4, 2)) == 4
    assert edge_connectivity(circulant(16, [1, 4])) == 4
    assert edge_connectivity(build_graph(4, [(0, 1), (2, 3)])) == 0


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=10))
def test_edge_connectivity_matches_networkx(g):
    expected = nx.edge_connectivity(to_nx(g)) if nx.is_connected(to_nx(g)) else 0
    assert edge_connectivity(g) == expected
    if expected:
        assert expected <= g.min_degree


def brute_force_independence(g):
    for size in range(g.n, 0, -1):
        for subset in itertools.combinations(range(g.n), size):
            s = set(subset)
            if all(not (u in s and v in s) for u, v in g.edges):
                return size
    return 0


def test_independence_examples():
    assert independence_number(hypercube(4)) == 8
    assert independence_number(circulant(5, [1])) == 2
    assert independence_number(build_graph(2, [(0, 1)])) == 1
    size, witness = independence_number(circulant(16, [1, 4]), witness=True)
    assert size == len(witness)
    ws = set(witness)
    assert not any(u in ws and v in ws for u, v in circulant(16, [1, 4]).edges)


@settings(max_examples=150, deadline=None)
@given(graphs(min_n=1, max_n=11))
def test_independence_matches_brute_force(g):
    assert independence_number(g) == brute_force_independence(g)
    assert independence_number(g, method="bnb") == brute_force_independence(g)


@pytest.mark.parametrize("n", range(1, 7))
def test_bipartite_methods_agree(n):
    q = hypercube(n)
    assert independence_number(q, method="matching") == independence_number(q, method="bnb") == 2 ** (n - 1)


def test_matching_method_rejects_odd_cycle():
    with pytest.raises(GraphError):
        independence_number(circulant(5, [1]), method="matching")


def test_remove_edges_examples():
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    path = remove_edges(tri, [(0, 2)])
    assert path.edges == ((0, 1), (1, 2))
    assert tri.m == 3
    k2 = remove_edges(build_graph(2, [(0, 1)]), [(1, 0)])
    assert k2.m == 0 and not is_connected(k2)
    with pytest.raises(GraphError):
        remove_edges(tri, [(0, 3)])
    with pytest.raises(GraphError):
        remove_edges(path, [(0, 2)])


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=10), st.data())
def test_remove_then_readd_roundtrips(g, data):
    drop = data.draw(st.lists(st.sampled_from(g.edges), unique=True)) if g.m else []
    h = remove_edges(g, drop)
    assert build_graph(g.n, list(h.edges) + drop).edges == g.edges


def test_text_format_roundtrip_and_canonical_bytes():
    g = hypercube(3)
    text = format_graph(g, comments=["Q3"])
    assert text.splitlines()[1] == "8 12"
    assert parse_graph(text).edges == g.edges
    shuffled = build_graph(g.n, list(reversed(g.edges)))
    assert format_graph(shuffled) == format_graph(g)


@pytest.mark.parametrize(
    "text, message",
    [
        ("3 2\n0 1\n", "declares 2 edges"),
        ("3 1\n1 0\n", "violates"),
        ("3 1\n0 x\n", "two integers"),
        ("", "no header"),
        ("3 2\n0 1\n0 1\n", "duplicate"),
    ],
)
def test_parse_graph_errors(text, message):
    with pytest.raises(GraphError, match=message):
        parse_graph(text)
