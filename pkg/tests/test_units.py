from itertools import combinations

import numpy as np
import pytest
from conftest import hypergraphs
from hypothesis import given
from oracles import twin_by_definition, units_by_pairs

from unit_spectra.core import Hypergraph
from unit_spectra.errors import HypergraphError
from unit_spectra.families import HyperflowerSpec, make_hyperflower
from unit_spectra.units import (
    are_twin_units,
    canonical_map,
    compute_units,
    local_automorphisms,
    twin_classes,
    twin_contraction,
    unit_contraction,
    unit_neighbours,
)

FIG1_UNITS = [
    ("1", "2"),
    ("3", "4"),
    ("5", "6", "15"),
    ("7", "8"),
    ("9", "10"),
    ("11", "12"),
    ("13", "14"),
    ("17", "18"),
]


def member_labels(H, P):
    return [tuple(H.vertices[i] for i in u.members) for u in P.units]


def edge_idx(H, *names):
    return [H.edge_index[n] for n in names]


def test_fig1_units(fig1):
    P = compute_units(fig1)
    assert member_labels(fig1, P) == FIG1_UNITS
    assert sorted(P.units[0].generators) == edge_idx(fig1, "e1", "e2", "e3", "e4", "e5")


def test_single_edge_is_one_unit():
    H = Hypergraph.from_edges(list("abc"), [list("abc")])
    P = compute_units(H)
    assert P.m == 1 and P.units[0].size == 3


def test_cospectral_hprime_units(cosp_hprime):
    P = compute_units(cosp_hprime)
    assert member_labels(cosp_hprime, P) == [("1", "2"), ("3", "4"), ("5", "6"), ("7", "8")]


def test_fig1_neighbours(fig1):
    nb = unit_neighbours(compute_units(fig1))
    assert (5, 7) in nb  # W_{E_6}, W_{E_8}
    assert (5, 6) not in nb  # W_{E_6}, W_{E_7}


def test_one_unit_has_no_neighbours():
    H = Hypergraph.from_edges(["a", "b"], [["a", "b"]])
    assert unit_neighbours(compute_units(H)) == set()


def test_fig1_unit_contraction(fig1):
    C = unit_contraction(fig1, compute_units(fig1))
    assert (C.quotient.n, C.quotient.m) == (8, 7)


def test_one_unit_contraction():
    H = Hypergraph.from_edges(["a", "b"], [["a", "b"]])
    C = unit_contraction(H, compute_units(H))
    assert C.quotient.n == 1 and C.quotient.sizes.tolist() == [1]


@pytest.mark.parametrize("l,r,t,m", [(1, 2, 1, 1), (2, 3, 1, 2), (3, 2, 2, 2), (2, 2, 3, 1)])
def test_hyperflower_unit_contraction_size(l, r, t, m):
    H, _ = make_hyperflower(HyperflowerSpec(l, r, t, m))
    assert unit_contraction(H, compute_units(H)).quotient.n == l + r


def test_smallest_hyperflower_is_one_unit():
    # l = r = 1 is a single edge, so periphery and centre merge
    H, _ = make_hyperflower(HyperflowerSpec(1, 1, 2, 3))
    assert compute_units(H).m == 1


def test_canonical_bijection_w6_w7(fig1):
    P = compute_units(fig1)
    f = are_twin_units(fig1, P, 5, 6)
    e4, e5, e6, e7 = edge_idx(fig1, "e4", "e5", "e6", "e7")
    assert f == {e4: e5, e6: e7}


def test_canonical_map_w8_to_w1_is_not_onto(fig1):
    # e6 -> e4 and e7 -> e5 as stated, but the star of W_{E_1} has five edges
    P = compute_units(fig1)
    e4, e5, e6, e7 = edge_idx(fig1, "e4", "e5", "e6", "e7")
    assert canonical_map(fig1, P, 7, 0) == {e6: e4, e7: e5}
    assert are_twin_units(fig1, P, 7, 0) is None


def test_w1_w2_not_twins(fig1):
    assert are_twin_units(fig1, compute_units(fig1), 0, 1) is None


def test_twin_index_errors(fig1):
    P = compute_units(fig1)
    with pytest.raises(HypergraphError):
        are_twin_units(fig1, P, 0, 0)
    with pytest.raises(HypergraphError):
        canonical_map(fig1, P, 0, 99)


def test_fig1_twin_classes(fig1):
    classes = twin_classes(fig1, compute_units(fig1))
    assert [c.members for c in classes] == [(0,), (1,), (2, 3, 4), (5, 6), (7,)]
    assert [c.equipotent for c in classes] == [True, True, False, True, True]


def test_all_distinct_stars_give_singleton_classes():
    H = Hypergraph.from_edges(list("abc"), [["a", "b"], ["b", "c"], ["a", "b", "c"]])
    assert all(c.size == 1 for c in twin_classes(H, compute_units(H)))


@pytest.mark.parametrize("l,r,t,m", [(2, 3, 1, 2), (3, 2, 2, 1), (2, 2, 3, 2), (1, 3, 2, 3)])
def test_hyperflower_two_twin_classes(l, r, t, m):
    H, _ = make_hyperflower(HyperflowerSpec(l, r, t, m))
    classes = twin_classes(H, compute_units(H))
    assert sorted(c.size for c in classes) == sorted([l, r])


def test_hyperflower_contraction_is_k2():
    H, _ = make_hyperflower(HyperflowerSpec(2, 1, 2, 2))
    P = compute_units(H)
    Hh = twin_contraction(H, P, twin_classes(H, P)).quotient
    assert Hh.n == 2 and Hh.m == 1 and Hh.sizes.tolist() == [2]


def test_one_unit_twin_contraction():
    H = Hypergraph.from_edges(["a", "b"], [["a", "b"]])
    P = compute_units(H)
    assert twin_contraction(H, P, twin_classes(H, P)).quotient.n == 1


def test_fig1_twin_contraction_size(fig1):
    P = compute_units(fig1)
    C = twin_contraction(fig1, P, twin_classes(fig1, P))
    assert C.quotient.n == 5
    assert C.edge_multiplicity == {"e1": 3, "e4": 2, "e6": 2}


def _perm_of(H, pairs):
    perm = np.arange(H.n)
    for a, b in pairs:
        ia, ib = H.index[a], H.index[b]
        perm[ia], perm[ib] = ib, ia
    return perm


def _preserves(H, perm):
    edges = {frozenset(m) for m in H.edge_members}
    return all(frozenset(int(perm[i]) for i in m) in edges for m in H.edge_members)


def test_fig1_local_automorphisms(fig1):
    P = compute_units(fig1)
    gens = local_automorphisms(fig1, P, twin_classes(fig1, P))
    swap12 = _perm_of(fig1, [("1", "2")])
    swap67 = _perm_of(fig1, [("11", "13"), ("12", "14")])
    assert _preserves(fig1, swap12) and _preserves(fig1, swap67)
    assert any(np.array_equal(g, swap12) for g in gens)
    assert any(np.array_equal(g, swap67) for g in gens)


def test_trivial_partition_has_no_generators():
    H = Hypergraph.from_edges(list("abc"), [["a", "b"], ["b", "c"], ["a", "b", "c"]])
    P = compute_units(H)
    assert local_automorphisms(H, P, twin_classes(H, P)) == []


@given(hypergraphs())
def test_units_match_pairwise_oracle(H):
    P = compute_units(H)
    assert sorted(u.members for u in P.units) == units_by_pairs(H)
    # generators are exactly the star of every member
    for u in P.units:
        for v in u.members:
            assert H.stars[v] == u.generators


@given(hypergraphs())
def test_twin_relation_matches_definition(H):
    P = compute_units(H)
    classes = twin_classes(H, P)
    cls_of = {u: k for k, c in enumerate(classes) for u in c.members}
    for i, j in combinations(range(P.m), 2):
        oracle = twin_by_definition(H, P.units[i].members, P.units[i].generators, P.units[j].members, P.units[j].generators)
        assert (are_twin_units(H, P, i, j) is not None) == oracle
        assert (cls_of[i] == cls_of[j]) == oracle


@given(hypergraphs())
def test_local_automorphisms_preserve_edges(H):
    P = compute_units(H)
    for perm in local_automorphisms(H, P, twin_classes(H, P)):
        assert _preserves(H, perm)


@given(hypergraphs())
def test_contraction_projection_consistent(H):
    P = compute_units(H)
    C = twin_contraction(H, P, twin_classes(H, P))
    for e in H.edges:
        img = frozenset(C.projection[v] for v in e.members)
        assert C.quotient.edges[C.quotient.edge_index[C.edge_projection[e.name]]].members == img
    assert sum(C.edge_multiplicity.values()) == H.m
    assert C.preimage(C.quotient.vertices) == set(H.vertices)
