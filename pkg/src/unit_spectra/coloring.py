"""Proper colourings of hypergraphs, bounds through the twin contraction, lifting."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Hypergraph, is_connected, is_simple
from .errors import HypergraphError, HypothesisError
from .units import Contraction, compute_units, twin_classes, twin_contraction

log = logging.getLogger(__name__)

EXACT_LIMIT = 20


@dataclass(frozen=True)
class Coloring:
    assignment: dict  # vertex label -> colour index
    num_colors: int


def is_proper(H: Hypergraph, coloring: Coloring) -> bool:
    """No edge is monochromatic."""
    for e in H.edges:
        if len({coloring.assignment[v] for v in e.members}) == 1:
            return False
    return True


def _csr(H: Hypergraph):
    eptr = np.zeros(H.m + 1, dtype=np.int64)
    emem = []
    for j, members in enumerate(H.edge_members):
        emem.extend(members)
        eptr[j + 1] = len(emem)
    vptr = np.zeros(H.n + 1, dtype=np.int64)
    vedges = []
    for i, s in enumerate(H.stars):
        vedges.extend(sorted(s))
        vptr[i + 1] = len(vedges)
    return vptr, np.array(vedges, dtype=np.int64), eptr, np.array(emem, dtype=np.int64)


def _search_order(H: Hypergraph) -> np.ndarray:
    deg = np.array([len(s) for s in H.stars])
    return np.array(sorted(range(H.n), key=lambda i: (-deg[i], i)), dtype=np.int64)


def find_coloring(H: Hypergraph, k: int) -> Coloring | None:
    arrays = _csr(H)
    colors = _kernels.k_coloring(k, _search_order(H), *arrays)
    if colors is None:
        return None
    return Coloring({v: int(colors[i]) for i, v in enumerate(H.vertices)}, int(colors.max()) + 1 if H.n else 0)


def chromatic_exact(H: Hypergraph, limit: int = EXACT_LIMIT) -> int | None:
    """Least number of colours of a proper colouring; None when |V| exceeds ``limit``."""
    if H.n > limit:
        return None
    if any(len(e.members) == 1 for e in H.edges):
        raise HypothesisError("a singleton edge is monochromatic under every colouring")
    if H.n == 0:
        return 0
    for k in range(1, H.n + 1):
        if find_coloring(H, k) is not None:
            return k
    raise AssertionError("n colours always suffice without singleton edges")


def greedy_coloring(H: Hypergraph) -> Coloring:
    """Descending 2-section degree order; each vertex takes the least colour leaving no edge monochromatic."""
    if any(len(e.members) == 1 for e in H.edges):
        raise HypothesisError("a singleton edge is monochromatic under every colouring")
    deg = np.zeros(H.n, dtype=np.int64)
    for members in H.edge_members:
        for i in members:
            deg[i] += len(members) - 1
    order = sorted(range(H.n), key=lambda i: (-deg[i], i))
    colors = np.full(H.n, -1, dtype=np.int64)
    for v in order:
        c = 0
        while True:
            colors[v] = c
            bad = False
            for j in H.stars[v]:
                vals = colors[list(H.edge_members[j])]
                if np.all(vals == c):
                    bad = True
                    break
            if not bad:
                break
            c += 1
    return Coloring({v: int(colors[i]) for i, v in enumerate(H.vertices)}, int(colors.max()) + 1 if H.n else 0)


def _check_hypotheses(H: Hypergraph, strict: bool) -> list[str]:
    problems = []
    if not is_simple(H):
        problems.append("not simple")
    if not is_connected(H):
        problems.append("not connected")
    if H.m <= 1:
        problems.append("at most one edge")
    if problems:
        if strict:
            raise HypothesisError("colouring bounds need a simple connected hypergraph with more than one edge", problems)
        warnings.warn("colouring hypotheses fail: " + ", ".join(problems), stacklevel=3)
    return problems


def lift_coloring(H: Hypergraph, contraction: Contraction, coloring: Coloring, strict: bool = True) -> Coloring:
    """Colour every vertex with the colour of its twin class."""
    _check_hypotheses(H, strict)
    if not is_proper(contraction.quotient, coloring):
        raise HypothesisError("the colouring of the contraction is not proper")
    lifted = Coloring({v: coloring.assignment[contraction.projection[v]] for v in H.vertices}, coloring.num_colors)
    assert is_proper(H, lifted), "lifted colouring is not proper"
    return lifted


def contraction_of(H: Hypergraph) -> Contraction:
    P = compute_units(H)
    return twin_contraction(H, P, twin_classes(H, P))


def rank(H: Hypergraph) -> int:
    return int(H.sizes.max()) if H.m else 0


@dataclass(frozen=True)
class BoundReport:
    chi_exact: int | None
    chi_contraction_greedy: int
    chi_contraction_exact: int | None
    n_classes: int
    rank_bound: int
    contraction_simple: bool

    @property
    def chi_contraction(self) -> int:
        return self.chi_contraction_exact if self.chi_contraction_exact is not None else self.chi_contraction_greedy

    def as_dict(self) -> dict:
        return {
            "chi_exact": self.chi_exact,
            "chi_contraction_greedy": self.chi_contraction_greedy,
            "chi_contraction_exact": self.chi_contraction_exact,
            "twin_classes": self.n_classes,
            "rank_bound": self.rank_bound,
            "contraction_simple": self.contraction_simple,
        }


def bound_report(H: Hypergraph, limit: int = EXACT_LIMIT, strict: bool = True) -> BoundReport:
    """chi(H) <= chi(H^) <= number of twin classes, and the rank bound |V(H^)| - rank(H^) + 2."""
    _check_hypotheses(H, strict)
    C = contraction_of(H)
    Hh = C.quotient
    chi = chromatic_exact(H, limit)
    greedy = greedy_coloring(Hh)
    assert is_proper(Hh, greedy)
    chi_hat = chromatic_exact(Hh, limit)
    rb = Hh.n - rank(Hh) + 2
    simple_hat = is_simple(Hh)
    rep = BoundReport(chi, greedy.num_colors, chi_hat, Hh.n, rb, simple_hat)
    upper = rep.chi_contraction
    assert upper <= Hh.n, "chi of the contraction exceeds its vertex count"
    if chi is not None:
        assert chi <= upper, "chi(H) exceeds chi of the contraction"
        if simple_hat:
            assert chi <= rb, "chi(H) exceeds the rank bound"
    return rep


def lift_independent_set(H: Hypergraph, contraction: Contraction, U, strict: bool = True) -> set:
    """Preimage of an independent set of the contraction; asserted to contain no edge of H."""
    _check_hypotheses(H, strict)
    U = set(U)
    unknown = U - set(contraction.quotient.vertices)
    if unknown:
        raise HypergraphError(f"unknown contraction vertices {sorted(unknown)}")
    for e in contraction.quotient.edges:
        if e.members <= U:
            raise HypothesisError(f"set is not independent in the contraction (contains {e.name})")
    pre = contraction.preimage(U)
    for e in H.edges:
        assert not e.members <= pre, f"lifted set contains edge {e.name}"
    return pre
