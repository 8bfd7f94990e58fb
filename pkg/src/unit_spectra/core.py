"""Hypergraph data model, weight presets and the ``.hg.json`` document format.

Vertices and edges keep the order in which they were given; every matrix in
the package is indexed by that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import bmat, csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import HypergraphError

PRESETS = ("R", "B", "N")


@dataclass(frozen=True)
class Hyperedge:
    name: str
    members: frozenset


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: tuple  # of Hyperedge

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v is None or (isinstance(v, str) and v == ""):
                raise HypergraphError("empty vertex label")
            if v in seen:
                raise HypergraphError(f"duplicate vertex {v!r}")
            seen.add(v)
        names = set()
        member_sets: dict[frozenset, str] = {}
        for e in self.edges:
            if e.name in names:
                raise HypergraphError(f"duplicate edge name {e.name!r}")
            names.add(e.name)
            if not e.members:
                raise HypergraphError(f"empty edge {e.name!r}")
            unknown = [v for v in e.members if v not in seen]
            if unknown:
                raise HypergraphError(f"edge {e.name!r} references unknown vertex {unknown[0]!r}")
            if e.members in member_sets:
                raise HypergraphError(f"duplicate edge: {e.name!r} repeats the member set of {member_sets[e.members]!r}")
            member_sets[e.members] = e.name

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Mapping[str, Iterable] | Sequence[Iterable]) -> "Hypergraph":
        """Build from a vertex list and either a name -> members map or a list of member lists."""
        if isinstance(edges, Mapping):
            items = list(edges.items())
        else:
            items = [(f"e{k + 1}", members) for k, members in enumerate(edges)]
        return cls(tuple(vertices), tuple(Hyperedge(str(name), frozenset(ms)) for name, ms in items))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.name: j for j, e in enumerate(self.edges)}

    @cached_property
    def edge_lookup(self) -> dict[frozenset, int]:
        return {e.members: j for j, e in enumerate(self.edges)}

    @cached_property
    def edge_members(self) -> tuple[tuple[int, ...], ...]:
        """Member vertex indices of each edge, sorted."""
        return tuple(tuple(sorted(self.index[v] for v in e.members)) for e in self.edges)

    @cached_property
    def incidence(self) -> np.ndarray:
        B = np.zeros((self.n, self.m))
        for j, members in enumerate(self.edge_members):
            B[list(members), j] = 1.0
        B.setflags(write=False)
        return B

    @cached_property
    def sizes(self) -> np.ndarray:
        s = np.array([len(e.members) for e in self.edges], dtype=np.int64)
        s.setflags(write=False)
        return s

    @cached_property
    def stars(self) -> tuple[frozenset, ...]:
        """Edge-index star of every vertex, by vertex index."""
        acc: list[set] = [set() for _ in range(self.n)]
        for j, members in enumerate(self.edge_members):
            for i in members:
                acc[i].add(j)
        return tuple(frozenset(s) for s in acc)

    def vertex_position(self, v) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise HypergraphError(f"unknown vertex {v!r}") from None


def star(H: Hypergraph, v) -> frozenset:
    """Edges containing ``v``."""
    return frozenset(H.edges[j] for j in H.stars[H.vertex_position(v)])


def star_of_set(H: Hypergraph, U: Iterable) -> frozenset:
    """Edges containing every vertex of ``U``."""
    idx = [H.vertex_position(v) for v in U]
    if not idx:
        raise HypergraphError("star of an empty vertex set")
    common = frozenset.intersection(*(H.stars[i] for i in idx))
    return frozenset(H.edges[j] for j in common)


def is_connected(H: Hypergraph) -> bool:
    if H.n <= 1:
        return True
    # bipartite vertex-edge graph
    B = csr_matrix(H.incidence)
    if H.m == 0:
        return False
    G = bmat([[None, B], [B.T, None]], format="csr")
    _, labels = connected_components(G, directed=False)
    return len(set(labels[: H.n])) == 1


def is_simple(H: Hypergraph) -> bool:
    """True when no edge is strictly contained in another."""
    sets = [e.members for e in H.edges]
    for a in sets:
        for b in sets:
            if a < b:
                return False
    return True


@dataclass(frozen=True, eq=False)
class WeightConfig:
    """Positive vertex weights (delta_V) and edge weights (delta_E).

    ``vertex`` and ``edge`` are indexed like ``H.vertices`` and ``H.edges``.
    Preset-derived configurations also carry exact rational copies, which the
    detectors and hypothesis checks use for exact comparisons.
    """

    vertex: np.ndarray
    edge: np.ndarray
    preset: str = "custom"
    vertex_exact: tuple | None = None
    edge_exact: tuple | None = None
    sizes: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.vertex, dtype=float)
        e = np.asarray(self.edge, dtype=float)
        if v.ndim != 1 or e.ndim != 1:
            raise HypergraphError("weights must be one-dimensional")
        if not np.all(np.isfinite(v)) or not np.all(np.isfinite(e)):
            raise HypergraphError("weights must be finite")
        if np.any(v <= 0) or np.any(e <= 0):
            raise HypergraphError("weights must be strictly positive")
        v.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "vertex", v)
        object.__setattr__(self, "edge", e)

    @property
    def exact(self) -> bool:
        return self.vertex_exact is not None and self.edge_exact is not None

    def check(self, H: Hypergraph) -> None:
        if self.vertex.shape != (H.n,) or self.edge.shape != (H.m,):
            raise HypergraphError(
                f"weight/hypergraph mismatch: got {self.vertex.shape[0]} vertex and "
                f"{self.edge.shape[0]} edge weights for |V|={H.n}, |E|={H.m}"
            )
        if self.sizes is not None and not np.array_equal(self.sizes, H.sizes):
            raise HypergraphError("weights were built for a hypergraph with different edge sizes")

    def sigma(self, H: Hypergraph) -> np.ndarray:
        """delta_E(e) / |e|^2."""
        return self.edge / H.sizes.astype(float) ** 2

    def rho(self, H: Hypergraph) -> np.ndarray:
        """delta_E(e) / |e|."""
        return self.edge / H.sizes.astype(float)

    def eta(self, H: Hypergraph) -> np.ndarray:
        """(|e| - 1) sigma(e)."""
        s = H.sizes.astype(float)
        return self.edge * (s - 1.0) / s**2

    def sigma_exact(self, H: Hypergraph) -> tuple | None:
        if self.edge_exact is None:
            return None
        return tuple(d / (int(k) ** 2) for d, k in zip(self.edge_exact, H.sizes))

    def with_vertex(self, vertex: np.ndarray, vertex_exact: tuple | None = None) -> "WeightConfig":
        return WeightConfig(vertex, self.edge, "custom", vertex_exact, self.edge_exact if vertex_exact else None, self.sizes)

    @classmethod
    def from_maps(cls, H: Hypergraph, vertex_weights: Mapping | None, edge_weights: Mapping | None) -> "WeightConfig":
        """Custom weights from label-keyed maps; missing maps default to 1."""
        v = np.ones(H.n)
        e = np.ones(H.m)
        for key, val in (vertex_weights or {}).items():
            v[_lookup_vertex(H, key)] = float(val)
        for key, val in (edge_weights or {}).items():
            if key not in H.edge_index:
                raise HypergraphError(f"weight given for unknown edge {key!r}")
            e[H.edge_index[key]] = float(val)
        return cls(v, e, "custom", sizes=H.sizes.copy())


def _lookup_vertex(H: Hypergraph, key):
    if key in H.index:
        return H.index[key]
    for v in H.vertices:
        if str(v) == str(key):
            return H.index[v]
    raise HypergraphError(f"weight given for unknown vertex {key!r}")


def preset_weights(H: Hypergraph, tag: str) -> WeightConfig:
    """R, B or N weights, with exact rational copies."""
    tag = tag.upper()
    if tag not in PRESETS:
        raise HypergraphError(f"unknown preset {tag!r}; expected one of {', '.join(PRESETS)}")
    sizes = [int(k) for k in H.sizes]
    if tag in ("B", "N"):
        single = [H.edges[j].name for j, k in enumerate(sizes) if k < 2]
        if single:
            raise HypergraphError(f"preset {tag} needs every edge of size >= 2; singleton edge {single[0]!r}")
        edge_exact = tuple(Fraction(k * k, k - 1) for k in sizes)
    else:
        edge_exact = tuple(Fraction(k * k) for k in sizes)
    if tag == "N":
        isolated = [H.vertices[i] for i, s in enumerate(H.stars) if not s]
        if isolated:
            raise HypergraphError(f"preset N needs every vertex in some edge; isolated vertex {isolated[0]!r}")
        vertex_exact = tuple(Fraction(len(s)) for s in H.stars)
    else:
        vertex_exact = tuple(Fraction(1) for _ in range(H.n))
    return WeightConfig(
        np.array([float(x) for x in vertex_exact]),
        np.array([float(x) for x in edge_exact]),
        tag,
        vertex_exact,
        edge_exact,
        np.asarray(sizes, dtype=np.int64),
    )


def resolve_weights(H: Hypergraph, weights: WeightConfig | str | None, default: str = "R") -> WeightConfig:
    if weights is None:
        weights = default
    if isinstance(weights, str):
        return preset_weights(H, weights)
    weights.check(H)
    return weights


# --- document format -------------------------------------------------------


def parse_document(text: str) -> tuple[Hypergraph, WeightConfig | None]:
    """Parse a ``.hg.json`` document into a hypergraph and its optional weights."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise HypergraphError("malformed document: top level must be an object")
    if "vertices" not in doc or "edges" not in doc:
        raise HypergraphError("malformed document: 'vertices' and 'edges' are required")
    verts = doc["vertices"]
    edges = doc["edges"]
    if not isinstance(verts, list):
        raise HypergraphError("malformed document: 'vertices' must be a list")
    if not isinstance(edges, dict):
        raise HypergraphError("malformed document: 'edges' must be an object")
    for v in verts:
        if not isinstance(v, (str, int)) or isinstance(v, bool):
            raise HypergraphError(f"malformed document: vertex label {v!r} must be a string or integer")
    vertices = tuple(str(v) for v in verts)
    items = []
    for name, members in edges.items():
        if not isinstance(members, list):
            raise HypergraphError(f"malformed document: members of {name!r} must be a list")
        labels = [str(x) for x in members]
        if len(set(labels)) != len(labels):
            raise HypergraphError(f"malformed document: edge {name!r} lists a vertex twice")
        items.append(Hyperedge(str(name), frozenset(labels)))
    H = Hypergraph(vertices, tuple(items))
    vw = doc.get("vertex_weights")
    ew = doc.get("edge_weights")
    weights = None
    if vw is not None or ew is not None:
        if (vw is not None and not isinstance(vw, dict)) or (ew is not None and not isinstance(ew, dict)):
            raise HypergraphError("malformed document: weight maps must be objects")
        weights = WeightConfig.from_maps(H, vw, ew)
    return H, weights


def parse_hypergraph(text: str) -> Hypergraph:
    return parse_document(text)[0]


def serialize_hypergraph(H: Hypergraph, weights: WeightConfig | None = None) -> str:
    """Canonical JSON text; ``parse_hypergraph`` inverts it exactly."""
    doc: dict = {
        "vertices": [str(v) for v in H.vertices],
        "edges": {e.name: [str(H.vertices[i]) for i in H.edge_members[j]] for j, e in enumerate(H.edges)},
    }
    if weights is not None:
        weights.check(H)
        doc["vertex_weights"] = {str(v): float(w) for v, w in zip(H.vertices, weights.vertex)}
        doc["edge_weights"] = {e.name: float(w) for e, w in zip(H.edges, weights.edge)}
    return json.dumps(doc, indent=2) + "\n"


def load(path) -> tuple[Hypergraph, WeightConfig | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def relabel(H: Hypergraph, mapping: Mapping) -> Hypergraph:
    """Same structure with vertices renamed through ``mapping``."""
    return Hypergraph(
        tuple(mapping[v] for v in H.vertices),
        tuple(Hyperedge(e.name, frozenset(mapping[v] for v in e.members)) for e in H.edges),
    )
