from fractions import Fraction

import numpy as np
import pytest
from conftest import hypergraphs
from hypothesis import given
from hypothesis import strategies as st
from oracles import operator_by_definition, transition_by_definition

from unit_spectra.core import Hypergraph, WeightConfig, preset_weights
from unit_spectra.errors import HypergraphError, HypothesisError
from unit_spectra.families import HyperflowerSpec, make_hyperflower
from unit_spectra.operators import (
    OperatorKind,
    apply_operator,
    build_C_H,
    build_operator,
    build_quotient,
    build_transition,
    check_compatibility,
    lift_class_vector,
    walk_weights,
)
from unit_spectra.units import compute_units, twin_classes

KINDS = ("A", "L", "Q")

QHAT_H = (2 / 3) * np.array([[2, 1, 1, 0], [1, 2, 1, 0], [1, 1, 2, 0], [0, 0, 0, 0]])
QHAT_HP = (2 / 3) * np.array([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1], [1, 1, 1, 3]])


def random_weights(H, data):
    v = data.draw(st.lists(st.floats(0.25, 4.0), min_size=H.n, max_size=H.n))
    e = data.draw(st.lists(st.floats(0.25, 4.0), min_size=H.m, max_size=H.m))
    return WeightConfig(np.array(v), np.array(e))


def unit_constant_weights(H, data):
    """delta_V constant on every unit, as the quotient needs."""
    P = compute_units(H)
    per_unit = data.draw(st.lists(st.floats(0.25, 4.0), min_size=P.m, max_size=P.m))
    e = data.draw(st.lists(st.floats(0.25, 4.0), min_size=H.m, max_size=H.m))
    return P, WeightConfig(np.array([per_unit[P.vertex_to_unit[i]] for i in range(H.n)]), np.array(e))


def test_kind_parse():
    assert OperatorKind.parse("q") is OperatorKind.Q
    with pytest.raises(HypergraphError):
        OperatorKind.parse("X")


def test_one_vertex_singleton_edge():
    H = Hypergraph.from_edges(["a"], {"e": ["a"]})
    w = preset_weights(H, "R")
    assert build_operator(H, w, "Q").matrix.tolist() == [[1.0]]
    assert build_operator(H, w, "L").matrix.tolist() == [[0.0]]
    assert build_operator(H, w, "A").matrix.tolist() == [[0.0]]


def test_cospectral_h_q_self_adjoint_and_kernel(cosp_h):
    w = preset_weights(cosp_h, "B")
    Q = build_operator(cosp_h, w, "Q").matrix
    DQ = w.vertex[:, None] * Q
    assert np.allclose(DQ, DQ.T, atol=1e-14)
    assert cosp_h.n - np.linalg.matrix_rank(Q, tol=1e-10) >= 4


def test_fig1_l_plus_q_is_diagonal(fig1):
    w = preset_weights(fig1, "B")
    S = build_operator(fig1, w, "L").matrix + build_operator(fig1, w, "Q").matrix
    rho = w.rho(fig1)
    expected = np.array([sum(rho[j] for j in fig1.stars[i]) for i in range(fig1.n)]) / w.vertex
    assert np.allclose(S, np.diag(expected), atol=1e-13)


@pytest.mark.parametrize("kind", KINDS)
@given(H=hypergraphs(), data=st.data())
def test_matrix_matches_definition(kind, H, data):
    w = random_weights(H, data)
    M = build_operator(H, w, kind).matrix
    assert np.allclose(M, operator_by_definition(H, w.vertex, w.edge, kind), atol=1e-12)
    x = data.draw(st.lists(st.floats(-3, 3), min_size=H.n, max_size=H.n))
    assert np.allclose(apply_operator(H, w, kind, np.array(x)), M @ np.array(x), atol=1e-10)


@given(H=hypergraphs(), data=st.data())
def test_laplacian_annihilates_constants(H, data):
    w = random_weights(H, data)
    assert np.abs(build_operator(H, w, "L").matrix @ np.ones(H.n)).max() <= 1e-12


def test_fig1_units_compatible(fig1):
    P = compute_units(fig1)
    rep = check_compatibility(build_operator(fig1, preset_weights(fig1, "B"), "Q"), P.classes())
    assert rep.max_violation == 0.0 and rep.pairs_checked == 1 + 1 + 3 + 1 + 1 + 1 + 1 + 1


def test_singletons_trivially_compatible(fig1):
    T = build_operator(fig1, preset_weights(fig1, "B"), "A")
    rep = check_compatibility(T, [(i,) for i in range(fig1.n)])
    assert rep.max_violation == 0.0 and rep.pairs_checked == 0


def test_merging_two_units_breaks_compatibility(fig1):
    P = compute_units(fig1)
    classes = P.classes()
    merged = [classes[0] + classes[1]] + classes[2:]
    T = build_operator(fig1, preset_weights(fig1, "B"), "Q")
    assert check_compatibility(T, merged).max_violation > 0


def test_compatibility_partition_must_cover(fig1):
    T = build_operator(fig1, preset_weights(fig1, "B"), "Q")
    with pytest.raises(HypergraphError):
        check_compatibility(T, [(0, 1)])


@pytest.mark.parametrize("kind", KINDS)
@given(H=hypergraphs(), data=st.data())
def test_units_compatible_property(kind, H, data):
    P, w = unit_constant_weights(H, data)
    assert check_compatibility(build_operator(H, w, kind), P.classes()).max_violation <= 1e-12


def test_cospectral_quotients(cosp_h, cosp_hprime):
    for H, expected in ((cosp_h, QHAT_H), (cosp_hprime, QHAT_HP)):
        Q = build_quotient(H, preset_weights(H, "B"), compute_units(H), "Q").matrix
        assert np.abs(Q - expected).max() <= 1e-12


def test_one_unit_quotient():
    H = Hypergraph.from_edges(list("abc"), {"e": list("abc")})
    w = WeightConfig(np.full(3, 2.0), np.array([5.0]))
    Q = build_quotient(H, w, compute_units(H), "Q").matrix
    assert Q.shape == (1, 1) and Q[0, 0] == pytest.approx(5.0 * 3 / (2.0 * 9))


def test_quotient_needs_unit_constant_weights(fig1):
    w = WeightConfig(np.arange(1.0, fig1.n + 1), np.ones(fig1.m))
    with pytest.raises(HypothesisError):
        build_quotient(fig1, w, compute_units(fig1), "Q")


@pytest.mark.parametrize("kind", KINDS)
@given(H=hypergraphs(), data=st.data())
def test_quotient_intertwines_blowup(kind, H, data):
    P, w = unit_constant_weights(H, data)
    Qt = build_quotient(H, w, P, kind).matrix
    T = build_operator(H, w, kind).matrix
    y = np.array(data.draw(st.lists(st.floats(-2, 2), min_size=P.m, max_size=P.m)))
    blow = y[list(P.vertex_to_unit)]
    assert np.allclose(T @ blow, (Qt @ y)[list(P.vertex_to_unit)], atol=1e-10)


def _c_h_lift_residual(H, w):
    P = compute_units(H)
    classes = twin_classes(H, P)
    C = build_C_H(H, w, P, classes)
    A = build_operator(H, w, "A").matrix
    worst = 0.0
    lam, Y = np.linalg.eig(C)
    for k in range(len(lam)):
        y = np.real(Y[:, k])
        x = lift_class_vector(H, P, classes, y)
        worst = max(worst, np.abs(A @ x - np.real(lam[k]) * x).max())
    return C, worst


def test_c_h_hyperflower_2222():
    H, _ = make_hyperflower(HyperflowerSpec(2, 2, 2, 2))
    C, res = _c_h_lift_residual(H, preset_weights(H, "R"))
    assert C.shape == (2, 2) and res <= 1e-12


def test_c_h_unequal_class_sizes_under_n():
    # the diagonal carries 1/c of its own class; frozen from an exact hand evaluation
    H, _ = make_hyperflower(HyperflowerSpec(2, 3, 2, 2))
    C, res = _c_h_lift_residual(H, preset_weights(H, "N"))
    assert np.allclose(C, [[1 / 3, 2 / 3], [2 / 3, 1 / 3]], atol=1e-15)
    assert res <= 1e-12


def test_c_h_single_vertex_class():
    H = Hypergraph.from_edges(["a", "b"], {"e": ["a", "b"], "f": ["a"]})
    P = compute_units(H)
    classes = twin_classes(H, P)
    C = build_C_H(H, preset_weights(H, "R"), P, classes)
    assert C[0, 0] == 0.0 and C.shape == (2, 2)


def test_c_h_fig1_hypothesis_failure(fig1):
    P = compute_units(fig1)
    with pytest.raises(HypothesisError, match="C_H"):
        build_C_H(fig1, preset_weights(fig1, "N"), P, twin_classes(fig1, P))


@given(H=hypergraphs(), data=st.data())
def test_c_h_lift_property(H, data):
    P = compute_units(H)
    classes = twin_classes(H, P)
    c = data.draw(st.sampled_from([1.0, 2.5]))
    w = WeightConfig(np.full(H.n, c), np.array([float(k * k) for k in H.sizes]))
    try:
        C = build_C_H(H, w, P, classes)
    except HypothesisError:
        return
    A = build_operator(H, w, "A").matrix
    y = np.array(data.draw(st.lists(st.floats(-2, 2), min_size=len(classes), max_size=len(classes))))
    x = lift_class_vector(H, P, classes, y)
    assert np.allclose(A @ x, lift_class_vector(H, P, classes, C @ y), atol=1e-10)


def test_two_state_chain():
    H = Hypergraph.from_edges(["a", "b"], {"e": ["a", "b"]})
    assert build_transition(H, preset_weights(H, "R")).matrix.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_fig1_rows_stochastic(fig1):
    P = build_transition(fig1, preset_weights(fig1, "B")).matrix
    assert np.abs(P.sum(axis=1) - 1).max() <= 1e-12


def test_walk_undefined_on_isolated_vertex():
    H = Hypergraph.from_edges(["a", "b", "c"], {"e": ["a", "b"]})
    with pytest.raises(HypergraphError, match="random walk"):
        build_transition(H, preset_weights(H, "R"))


@given(H=hypergraphs(no_isolated=True, min_size=2), data=st.data())
def test_transition_matches_definition_and_laplacian(H, data):
    w = random_weights(H, data)
    T = build_transition(H, w)
    assert np.allclose(T.matrix, transition_by_definition(H, w.edge), atol=1e-12)
    assert np.abs(T.matrix.sum(axis=1) - 1).max() <= 1e-12
    L = build_operator(H, walk_weights(H, w), "L").matrix
    assert np.abs(T.laplacian - L).max() <= 1e-12


def test_walk_weights_exact(fig1):
    ww = walk_weights(fig1, preset_weights(fig1, "B"))
    # vertex 1 sits in edges of sizes 6, 6, 7, 4, 4; sigma (|e| - 1) = 1 under B
    assert ww.vertex_exact[fig1.index["1"]] == Fraction(5)
