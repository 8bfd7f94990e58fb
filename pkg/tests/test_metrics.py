import numpy as np
import pytest
from conftest import hypergraphs
from hypothesis import given
from hypothesis import strategies as st
from oracles import floyd_warshall, max_clique_brute, walks_brute

from unit_spectra.core import Hypergraph, is_connected
from unit_spectra.families import HyperflowerSpec, make_hyperflower
from unit_spectra.metrics import clique_number, distance_report, is_pseudometric, unit_graph, unit_walk_count
from unit_spectra.units import compute_units


def graph_of(H):
    P = compute_units(H)
    return P, unit_graph(H, P)


@pytest.mark.parametrize("l,r", [(2, 2), (3, 2), (1, 3)])
def test_hyperflower_unit_graph_is_complete_bipartite(l, r):
    H, lab = make_hyperflower(HyperflowerSpec(l, r, 2, 1))
    P, G = graph_of(H)
    side = {P.vertex_to_unit[H.index[c[0]]]: "p" for c in lab.peripheral}
    side.update({P.vertex_to_unit[H.index[c[0]]]: "c" for c in lab.central})
    assert len(G.edges) == l * r
    assert all(side[i] != side[j] for i, j in G.edges)


def test_one_unit_graph():
    H = Hypergraph.from_edges(["a", "b"], [["a", "b"]])
    _, G = graph_of(H)
    assert G.n_units == 1 and G.edges == ()


def test_fig1_unit_graph(fig1):
    _, G = graph_of(fig1)
    assert G.adjacency[5, 7] == 1 and G.adjacency[5, 6] == 0


def test_fig1_same_unit_distance_zero(fig1):
    P, G = graph_of(fig1)
    rep = distance_report(fig1, P, G)
    i, j = fig1.index["1"], fig1.index["2"]
    assert rep.vertex_distance[i, j] == 0
    assert rep.vertex_distance[fig1.index["2"], fig1.index["3"]] == 1


def test_hyperflower_2222_invariants():
    H, _ = make_hyperflower(HyperflowerSpec(2, 2, 2, 2))
    P, G = graph_of(H)
    rep = distance_report(H, P, G)
    assert rep.diameter == 2 and rep.girth == 4
    assert rep.max_partition == 2 == rep.clique_number


def test_acyclic_girth_is_infinite():
    H = Hypergraph.from_edges(list("abc"), [["a", "b"], ["b", "c"]])
    P, G = graph_of(H)
    assert np.isinf(distance_report(H, P, G).girth)
    assert distance_report(H, P, G).as_dict(H)["girth"] is None


def test_disconnected_report():
    H = Hypergraph.from_edges(list("abcd"), [["a", "b"], ["c", "d"]])
    P, G = graph_of(H)
    rep = distance_report(H, P, G)
    assert not rep.connected and np.isinf(rep.diameter)
    assert rep.unit_distance[0, 1] == -1


def test_walk_counts():
    H, _ = make_hyperflower(HyperflowerSpec(2, 2, 1, 1))
    _, G = graph_of(H)
    assert unit_walk_count(G, 0, 0, 0) == 1 and unit_walk_count(G, 0, 1, 0) == 0
    assert unit_walk_count(G, 0, 0, 2) == 2
    with pytest.raises(ValueError):
        unit_walk_count(G, 0, 0, -1)


@given(hypergraphs(max_n=8, max_m=6), st.integers(0, 4))
def test_walk_count_matches_enumeration(H, k):
    _, G = graph_of(H)
    if G.n_units > 8:
        return
    for i in range(G.n_units):
        for j in range(G.n_units):
            assert unit_walk_count(G, i, j, k) == walks_brute(G.adjacency, i, j, k)


@given(hypergraphs(max_n=10, max_m=7))
def test_distances_and_clique_match_oracles(H):
    P, G = graph_of(H)
    rep = distance_report(H, P, G)
    D = floyd_warshall(G.adjacency)
    assert np.array_equal(np.where(np.isinf(D), -1, D).astype(int), rep.unit_distance)
    assert rep.clique_number == max_clique_brute(G.adjacency)


@given(hypergraphs(max_n=10, max_m=7))
def test_metric_invariants(H):
    P, G = graph_of(H)
    rep = distance_report(H, P, G)
    assert is_pseudometric(rep.vertex_distance)
    assert rep.max_partition <= rep.clique_number
    if is_connected(H):
        assert H.m >= rep.diameter
    if rep.min_partition >= 3:
        assert rep.girth == 3


def test_pseudometric_detects_violation():
    D = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert not is_pseudometric(D)
    assert is_pseudometric(np.array([[0, -1], [-1, 0]]))
