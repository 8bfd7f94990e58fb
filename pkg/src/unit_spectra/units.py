"""Units, twin units, the two contractions and local automorphisms.

A unit is a maximal set of vertices sharing the same star. Two units are twins
when swapping one for the other inside every edge of the first unit's star
yields exactly the second unit's star.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import Hyperedge, Hypergraph
from .errors import HypergraphError


@dataclass(frozen=True)
class Unit:
    generators: frozenset  # edge indices
    members: tuple  # vertex indices, ascending

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class UnitPartition:
    units: tuple  # of Unit
    vertex_to_unit: tuple  # unit index per vertex index
    edge_units: tuple  # unit indices meeting each edge, ascending

    @property
    def m(self) -> int:
        return len(self.units)

    def indicator(self, i: int, n: int) -> np.ndarray:
        x = np.zeros(n)
        x[list(self.units[i].members)] = 1.0
        return x

    def sizes(self) -> np.ndarray:
        return np.array([u.size for u in self.units], dtype=np.int64)

    def classes(self) -> list[tuple]:
        return [u.members for u in self.units]


@dataclass(frozen=True)
class TwinClass:
    members: tuple  # unit indices, ascending
    equipotent: bool

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Contraction:
    kind: str  # "unit" or "twin"
    quotient: Hypergraph
    projection: dict  # vertex label -> quotient vertex label
    edge_projection: dict  # edge name -> quotient edge name
    edge_multiplicity: dict  # quotient edge name -> number of preimages
    classes: tuple = ()  # vertex-index tuple behind each quotient vertex

    def pushforward(self, values: dict) -> dict:
        """Sum an edge weighting over the preimages of every quotient edge."""
        out: dict = {}
        for name, image in self.edge_projection.items():
            out[image] = out.get(image, 0) + values[name]
        return out

    def preimage(self, quotient_vertices) -> set:
        wanted = set(quotient_vertices)
        return {v for v, a in self.projection.items() if a in wanted}


def compute_units(H: Hypergraph) -> UnitPartition:
    groups: dict[frozenset, list[int]] = {}
    for i, s in enumerate(H.stars):
        groups.setdefault(s, []).append(i)
    ordered = sorted(groups.items(), key=lambda kv: kv[1][0])
    units = tuple(Unit(star, tuple(members)) for star, members in ordered)
    v2u = [0] * H.n
    for k, u in enumerate(units):
        for i in u.members:
            v2u[i] = k
    edge_units = tuple(tuple(sorted({v2u[i] for i in members})) for members in H.edge_members)
    return UnitPartition(units, tuple(v2u), edge_units)


def unit_neighbours(P: UnitPartition) -> set[tuple[int, int]]:
    pairs = set()
    for us in P.edge_units:
        pairs.update(combinations(us, 2))
    return pairs


def unit_contraction(H: Hypergraph, P: UnitPartition) -> Contraction:
    labels = [f"W{k + 1}" for k in range(P.m)]
    edges = tuple(Hyperedge(e.name, frozenset(labels[k] for k in P.edge_units[j])) for j, e in enumerate(H.edges))
    Hbar = Hypergraph(tuple(labels), edges)
    return Contraction(
        "unit",
        Hbar,
        {v: labels[P.vertex_to_unit[i]] for i, v in enumerate(H.vertices)},
        {e.name: e.name for e in H.edges},
        {e.name: 1 for e in H.edges},
        tuple(u.members for u in P.units),
    )


def _check_unit_index(P: UnitPartition, i: int) -> None:
    if not (0 <= i < P.m):
        raise HypergraphError(f"invalid unit index {i}")


def canonical_map(H: Hypergraph, P: UnitPartition, i: int, j: int) -> dict[int, int]:
    """Images of e -> (e minus W_i) union W_j over the star of W_i that are edges of H."""
    _check_unit_index(P, i)
    _check_unit_index(P, j)
    Wi = {H.vertices[v] for v in P.units[i].members}
    Wj = {H.vertices[v] for v in P.units[j].members}
    out = {}
    for e in sorted(P.units[i].generators):
        image = (H.edges[e].members - Wi) | Wj
        f = H.edge_lookup.get(frozenset(image))
        if f is not None:
            out[e] = f
    return out


def are_twin_units(H: Hypergraph, P: UnitPartition, i: int, j: int) -> dict[int, int] | None:
    """The canonical bijection between generating sets, or None when the units are not twins."""
    _check_unit_index(P, i)
    _check_unit_index(P, j)
    if i == j:
        raise HypergraphError("twin test needs two distinct units")
    Ei, Ej = P.units[i].generators, P.units[j].generators
    if len(Ei) != len(Ej):
        return None
    f = canonical_map(H, P, i, j)
    if len(f) != len(Ei) or set(f.values()) != set(Ej):
        return None
    return f


def twin_classes(H: Hypergraph, P: UnitPartition) -> list[TwinClass]:
    parent = list(range(P.m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    twin = {}
    for i, j in combinations(range(P.m), 2):
        ok = are_twin_units(H, P, i, j) is not None
        twin[(i, j)] = ok
        if ok:
            parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for k in range(P.m):
        groups.setdefault(find(k), []).append(k)
    neighbours = unit_neighbours(P)
    out = []
    for members in sorted(groups.values(), key=lambda g: g[0]):
        for pair in combinations(members, 2):
            # the twin relation is asserted to be an equivalence, not assumed
            assert twin[pair], f"twin relation not transitive on units {pair}"
            assert pair not in neighbours, f"twin units {pair} are unit-neighbours"
        sizes = {P.units[k].size for k in members}
        out.append(TwinClass(tuple(members), len(sizes) == 1))
    return out


def twin_contraction(H: Hypergraph, P: UnitPartition, classes: list[TwinClass]) -> Contraction:
    labels = [f"C{k + 1}" for k in range(len(classes))]
    unit_to_class = {}
    for k, c in enumerate(classes):
        for u in c.members:
            unit_to_class[u] = k
    if sorted(unit_to_class) != list(range(P.m)):
        raise HypergraphError("twin classes must partition the units")
    projection = {v: labels[unit_to_class[P.vertex_to_unit[i]]] for i, v in enumerate(H.vertices)}
    images: dict[frozenset, str] = {}
    edge_projection = {}
    multiplicity: dict[str, int] = {}
    for j, e in enumerate(H.edges):
        img = frozenset(projection[v] for v in e.members)
        name = images.setdefault(img, e.name)
        edge_projection[e.name] = name
        multiplicity[name] = multiplicity.get(name, 0) + 1
    quotient = Hypergraph(tuple(labels), tuple(Hyperedge(name, img) for img, name in images.items()))
    support = tuple(tuple(sorted(i for u in c.members for i in P.units[u].members)) for c in classes)
    return Contraction("twin", quotient, projection, edge_projection, multiplicity, support)


def _preserves_edges(H: Hypergraph, perm: np.ndarray) -> bool:
    edges = set(H.edge_lookup)
    for members in H.edge_members:
        image = frozenset(H.vertices[perm[i]] for i in members)
        if image not in edges:
            return False
    return True


def local_automorphisms(H: Hypergraph, P: UnitPartition, classes: list[TwinClass]) -> list[np.ndarray]:
    """Permutations of vertex indices: transpositions inside units and swaps of equipotent twins."""
    gens = []
    for u in P.units:
        for a, b in combinations(u.members, 2):
            perm = np.arange(H.n)
            perm[a], perm[b] = b, a
            gens.append(perm)
    for c in classes:
        for i, j in combinations(c.members, 2):
            Wi, Wj = P.units[i].members, P.units[j].members
            if len(Wi) != len(Wj):
                continue
            perm = np.arange(H.n)
            for a, b in zip(Wi, Wj):
                perm[a], perm[b] = b, a
            gens.append(perm)
    for perm in gens:
        assert _preserves_edges(H, perm), "local automorphism does not preserve E(H)"
    return gens


def unit_names(H: Hypergraph, P: UnitPartition, i: int) -> tuple[list, list[str]]:
    u = P.units[i]
    return [H.vertices[k] for k in u.members], [H.edges[j].name for j in sorted(u.generators)]
