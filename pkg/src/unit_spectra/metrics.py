"""Unit graph, unit distance and the invariants built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import _kernels
from .core import Hypergraph
from .units import UnitPartition, unit_neighbours


@dataclass(frozen=True, eq=False)
class UnitGraph:
    n_units: int
    edges: tuple  # sorted pairs (i, j), i < j
    adjacency: np.ndarray  # int 0/1


@dataclass(frozen=True, eq=False)
class DistanceReport:
    unit_distance: np.ndarray  # m x m, -1 where unreachable
    vertex_distance: np.ndarray  # n x n, -1 where unreachable
    connected: bool
    eccentricity: np.ndarray  # per vertex, inf when disconnected
    diameter: float
    radius: float
    girth: float  # inf when G_H is acyclic
    clique_number: int
    max_partition: int
    min_partition: int
    closeness: np.ndarray  # per vertex, nan when undefined
    eccentricity_centrality: np.ndarray  # per vertex, nan when undefined

    def as_dict(self, H: Hypergraph) -> dict:
        def num(x):
            return None if not np.isfinite(x) else (int(x) if float(x).is_integer() else float(x))

        labels = [str(v) for v in H.vertices]
        return {
            "connected": self.connected,
            "unit_distance": self.unit_distance.tolist(),
            "eccentricity": {labels[i]: num(x) for i, x in enumerate(self.eccentricity)},
            "diameter": num(self.diameter),
            "radius": num(self.radius),
            "girth": num(self.girth),
            "clique_number": self.clique_number,
            "max_partition_number": self.max_partition,
            "min_partition_number": self.min_partition,
            "closeness": {labels[i]: num(x) for i, x in enumerate(self.closeness)},
            "eccentricity_centrality": {labels[i]: num(x) for i, x in enumerate(self.eccentricity_centrality)},
        }


def unit_graph(H: Hypergraph, P: UnitPartition) -> UnitGraph:
    pairs = tuple(sorted(unit_neighbours(P)))
    A = np.zeros((P.m, P.m), dtype=np.int64)
    for i, j in pairs:
        A[i, j] = A[j, i] = 1
    A.setflags(write=False)
    return UnitGraph(P.m, pairs, A)


def _girth(A: np.ndarray) -> float:
    n = A.shape[0]
    best = np.inf
    nbrs = [np.flatnonzero(A[i]) for i in range(n)]
    for root in range(n):
        dist = np.full(n, -1)
        parent = np.full(n, -1)
        dist[root] = 0
        queue = [root]
        for x in queue:
            for y in nbrs[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return float(best)


def clique_number(G: UnitGraph) -> int:
    rows = [sum(1 << int(j) for j in np.flatnonzero(G.adjacency[i])) for i in range(G.n_units)]
    return _kernels.max_clique_size(rows)


def distance_report(H: Hypergraph, P: UnitPartition, G: UnitGraph | None = None) -> DistanceReport:
    G = G or unit_graph(H, P)
    D = shortest_path(csr_matrix(G.adjacency.astype(float)), unweighted=True, directed=False)
    unit_d = np.where(np.isfinite(D), D, -1).astype(np.int64)
    v2u = np.asarray(P.vertex_to_unit)
    Dv = D[np.ix_(v2u, v2u)]
    connected = bool(np.all(np.isfinite(D)))
    ecc = Dv.max(axis=1) if H.n else np.zeros(0)
    diameter = float(ecc.max()) if H.n else 0.0
    radius = float(ecc.min()) if H.n else 0.0
    with np.errstate(divide="ignore"):
        total = Dv.sum(axis=1)
        closeness = np.where(np.isfinite(total) & (total > 0), 1.0 / np.where(total > 0, total, 1.0), np.nan)
        ecc_c = np.where(np.isfinite(ecc) & (ecc > 0), 1.0 / np.where(ecc > 0, ecc, 1.0), np.nan)
    parts = [len(us) for us in P.edge_units]
    return DistanceReport(
        unit_d,
        np.where(np.isfinite(Dv), Dv, -1).astype(np.int64),
        connected,
        ecc,
        diameter,
        radius,
        _girth(G.adjacency),
        clique_number(G),
        max(parts, default=0),
        min(parts, default=0),
        closeness,
        ecc_c,
    )


def unit_walk_count(G: UnitGraph, i: int, j: int, k: int) -> int:
    """Number of walks of length k from unit i to unit j in G_H (exact integer arithmetic)."""
    if k < 0:
        raise ValueError("walk length must be nonnegative")
    A = G.adjacency.astype(object)
    M = np.identity(G.n_units, dtype=object)
    base = A
    while k:
        if k & 1:
            M = M.dot(base)
        base = base.dot(base)
        k >>= 1
    return int(M[i, j])


def is_pseudometric(D: np.ndarray) -> bool:
    """Zero diagonal, symmetry and the triangle inequality (-1 read as infinity)."""
    X = np.where(D < 0, np.inf, D.astype(float))
    if np.any(np.diag(X) != 0) or not np.array_equal(X, X.T):
        return False
    n = X.shape[0]
    for k in range(n):
        if np.any(X > X[:, [k]] + X[[k], :]):
            return False
    return True

