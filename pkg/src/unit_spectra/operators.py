"""General adjacency (A), Laplacian (L) and signless Laplacian (Q) operators.

With sigma(e) = delta_E(e)/|e|^2 the operators act as

    (Q x)(v) = sum_{e in E_v} sigma(e)/delta_V(v) * sum_{u in e} x(u)
    (L x)(v) = sum_{e in E_v} sigma(e)/delta_V(v) * sum_{u in e} (x(v) - x(u))
    (A x)(v) = sum_{e in E_v} sigma(e)/delta_V(v) * sum_{u in e, u != v} x(u)

Quotient matrices use the layout entry (j, i) = c^i_j, so that
T chi_{W_i} = sum_j c^i_j chi_{W_j} reads as ordinary matrix-vector action.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .config import DEFAULT, Tolerances
from .core import Hypergraph, WeightConfig
from .errors import HypergraphError, HypothesisError
from .units import TwinClass, UnitPartition, are_twin_units


class OperatorKind(str, Enum):
    A = "A"
    L = "L"
    Q = "Q"

    @classmethod
    def parse(cls, kind) -> "OperatorKind":
        if isinstance(kind, OperatorKind):
            return kind
        aliases = {"ADJACENCY": "A", "LAPLACIAN": "L", "SIGNLESSLAPLACIAN": "Q", "SIGNLESS": "Q"}
        key = str(kind).upper().replace("_", "").replace(" ", "")
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise HypergraphError(f"unknown operator kind {kind!r}") from None


@dataclass(frozen=True, eq=False)
class DenseOperator:
    kind: OperatorKind
    matrix: np.ndarray
    weights: WeightConfig

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def norm_inf(self) -> float:
        return float(np.abs(self.matrix).sum(axis=1).max()) if self.n else 0.0


@dataclass(frozen=True, eq=False)
class QuotientOperator:
    kind: OperatorKind
    matrix: np.ndarray
    class_constants: np.ndarray  # delta_V on each unit
    unit_sizes: np.ndarray

    @property
    def inner_weights(self) -> np.ndarray:
        """The quotient is self-adjoint for the diagonal inner product c_j |W_j|."""
        return self.class_constants * self.unit_sizes


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    matrix: np.ndarray
    r: np.ndarray
    laplacian: np.ndarray  # I - P


def faria_vector(n: int, u: int, v: int) -> np.ndarray:
    x = np.zeros(n)
    x[u] = -1.0
    x[v] = 1.0
    return x


def faria_basis(n: int, members) -> list[np.ndarray]:
    """Basis {x_{u0,ui}} of the zero-sum vectors supported on ``members``."""
    members = list(members)
    return [faria_vector(n, members[0], w) for w in members[1:]]


def build_operator(H: Hypergraph, weights: WeightConfig, kind) -> DenseOperator:
    kind = OperatorKind.parse(kind)
    weights.check(H)
    B = H.incidence
    sigma = weights.sigma(H)
    dv = weights.vertex
    S = (B * sigma) @ B.T  # S[v,u] = sum over E_uv of sigma
    deg = B @ sigma
    if kind is OperatorKind.Q:
        M = S
    elif kind is OperatorKind.A:
        M = S - np.diag(deg)
        np.fill_diagonal(M, 0.0)
    else:
        M = np.diag(B @ (sigma * H.sizes)) - S
        np.fill_diagonal(M, B @ (sigma * (H.sizes - 1)))
    M = M / dv[:, None]
    M.setflags(write=False)
    return DenseOperator(kind, M, weights)


def apply_operator(H: Hypergraph, weights: WeightConfig, kind, x: np.ndarray) -> np.ndarray:
    """Matrix-free action evaluated edge by edge from the defining sums."""
    kind = OperatorKind.parse(kind)
    x = np.asarray(x, dtype=float)
    sigma = weights.sigma(H)
    out = np.zeros(H.n)
    for j, members in enumerate(H.edge_members):
        total = sum(x[u] for u in members)
        k = len(members)
        for v in members:
            if kind is OperatorKind.Q:
                out[v] += sigma[j] * total
            elif kind is OperatorKind.A:
                out[v] += sigma[j] * (total - x[v])
            else:
                out[v] += sigma[j] * (k * x[v] - total)
    return out / weights.vertex


@dataclass(frozen=True)
class CompatibilityReport:
    max_violation: float
    worst_pair: tuple | None
    pairs_checked: int

    def ok(self, tol: float = DEFAULT.identity) -> bool:
        return self.max_violation <= tol


def check_compatibility(T: DenseOperator, partition) -> CompatibilityReport:
    """Max entry of T S_uv - S_uv T over every within-class transposition S_uv."""
    M = T.matrix
    covered = sorted(i for cls in partition for i in cls)
    if covered != list(range(T.n)):
        raise HypergraphError("partition must cover every vertex exactly once")
    worst, where, count = 0.0, None, 0
    for cls in partition:
        for u, v in combinations(sorted(cls), 2):
            perm = np.arange(T.n)
            perm[u], perm[v] = v, u
            # (T S)[a, b] = M[a, perm[b]] and (S T)[a, b] = M[perm[a], b]
            diff = np.abs(M[:, perm] - M[perm, :]).max()
            count += 1
            if diff > worst or where is None:
                worst, where = max(worst, float(diff)), (u, v)
    return CompatibilityReport(worst, where, count)


def _unit_constants(H: Hypergraph, weights: WeightConfig, P: UnitPartition, tol: Tolerances) -> np.ndarray:
    c = np.empty(P.m)
    bad = []
    for k, u in enumerate(P.units):
        vals = weights.vertex[list(u.members)]
        if weights.vertex_exact is not None:
            exact = {weights.vertex_exact[i] for i in u.members}
            const = len(exact) == 1
        else:
            const = np.ptp(vals) <= tol.weight * max(1.0, np.abs(vals).max())
        if not const:
            bad.append(f"delta_V not constant on unit W{k + 1}")
        c[k] = vals[0]
    if bad:
        raise HypothesisError("quotient needs delta_V constant on every unit", bad)
    return c


def build_quotient(H: Hypergraph, weights: WeightConfig, P: UnitPartition, kind, tol: Tolerances = DEFAULT) -> QuotientOperator:
    kind = OperatorKind.parse(kind)
    weights.check(H)
    c = _unit_constants(H, weights, P, tol)
    sizes = P.sizes()
    sigma = weights.sigma(H)
    m = P.m
    M = np.zeros((m, m))
    for e, us in enumerate(P.edge_units):
        k = int(H.sizes[e])
        s = sigma[e]
        # |e cap W_i| = |W_i| since e is a disjoint union of whole units
        for j in us:
            for i in us:
                if kind is OperatorKind.Q:
                    M[j, i] += sizes[i] * s / c[j]
                elif kind is OperatorKind.L:
                    M[j, i] += s / c[j] * ((k if i == j else 0) - sizes[i])
                elif i != j:
                    M[j, i] += s / c[j] * sizes[i]
                else:
                    M[j, i] += s / c[j] * (sizes[i] - 1)
    M.setflags(write=False)
    return QuotientOperator(kind, M, c, sizes)


def _exact_sigma(H: Hypergraph, weights: WeightConfig):
    ex = weights.sigma_exact(H)
    return ex if ex is not None else tuple(weights.sigma(H))


def _equal(a, b, tol: Tolerances) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= tol.weight * max(1.0, abs(float(a)), abs(float(b)))


def build_C_H(H: Hypergraph, weights: WeightConfig, P: UnitPartition, classes: list[TwinClass], tol: Tolerances = DEFAULT) -> np.ndarray:
    """Action of A on class-constant vectors, one row and column per twin class.

    Same layout as the unit quotients: entry (q, p) is the coefficient of
    class p in the image of class q. For p != q it equals
    (m_p / c_q) * sum over W_i in class p of sum over E_i cap E_j of sigma,
    for any W_j in class q; the diagonal is ((m_q - 1) / c_q) * sum over E_j
    of sigma. Here m_p is the common unit size and c_q the common delta_V
    value of a class. With y on the classes and y~(v) = y(class of v),
    (A y~)(v) = (C_H y)(class of v).
    """
    weights.check(H)
    sig = _exact_sigma(H, weights)
    vw = weights.vertex_exact if weights.vertex_exact is not None else tuple(weights.vertex)
    failures: list[str] = []
    k = len(classes)
    cst, msz = [], []
    for p, cls in enumerate(classes):
        verts = [i for u in cls.members for i in P.units[u].members]
        vals = {vw[i] for i in verts} if weights.vertex_exact is not None else None
        if vals is not None:
            if len(vals) != 1:
                failures.append(f"delta_V not constant on class C{p + 1}")
        elif np.ptp(weights.vertex[verts]) > tol.weight * max(1.0, weights.vertex[verts].max()):
            failures.append(f"delta_V not constant on class C{p + 1}")
        cst.append(vw[verts[0]])
        if not cls.equipotent:
            failures.append(f"units of class C{p + 1} are not equipotent")
        msz.append(P.units[cls.members[0]].size)
        rep = cls.members[0]
        for other in cls.members[1:]:
            f = are_twin_units(H, P, rep, other)
            if f is None:
                failures.append(f"units W{rep + 1}, W{other + 1} of class C{p + 1} are not twins")
                continue
            for e, g in f.items():
                if not _equal(sig[e], sig[g], tol):
                    failures.append(f"canonical bijection W{rep + 1}->W{other + 1} does not preserve sigma ({H.edges[e].name}->{H.edges[g].name})")
                    break
    if failures:
        raise HypothesisError("C_H hypotheses fail", failures)

    zero = Fraction(0) if weights.edge_exact is not None else 0.0

    def entry(q, p, j):
        Ej = P.units[j].generators
        if p == q:
            return (msz[q] - 1) * sum((sig[e] for e in Ej), start=zero) / cst[q]
        total = sum((sig[e] for i in classes[p].members for e in P.units[i].generators & Ej), start=zero)
        return msz[p] * total / cst[q]

    C = np.zeros((k, k))
    for q in range(k):
        for p in range(k):
            vals = [entry(q, p, j) for j in classes[q].members]
            # representative independence is asserted
            for val in vals[1:]:
                if not _equal(vals[0], val, tol):
                    raise HypothesisError("C_H entry depends on the representative", [f"entry (C{q + 1}, C{p + 1})"])
            C[q, p] = float(vals[0])
    return C


def lift_class_vector(H: Hypergraph, P: UnitPartition, classes: list[TwinClass], y: np.ndarray) -> np.ndarray:
    out = np.zeros(H.n)
    for p, cls in enumerate(classes):
        for u in cls.members:
            out[list(P.units[u].members)] = y[p]
    return out


def build_transition(H: Hypergraph, weights: WeightConfig) -> TransitionMatrix:
    """P(u, v) = (1/r(u)) sum over E_uv of sigma / delta_V(u), with r(u) = sum over E_u of (|e|-1) sigma / delta_V(u)."""
    weights.check(H)
    B = H.incidence
    sigma = weights.sigma(H)
    r = (B @ (sigma * (H.sizes - 1))) / weights.vertex
    zero = [H.vertices[i] for i in np.flatnonzero(r <= 0)]
    if zero:
        raise HypergraphError(f"random walk undefined: r(u) = 0 at vertex {zero[0]!r} (isolated or only singleton edges)")
    S = (B * sigma) @ B.T
    np.fill_diagonal(S, 0.0)
    Pm = S / (weights.vertex * r)[:, None]
    Pm.setflags(write=False)
    lap = np.eye(H.n) - Pm
    lap.setflags(write=False)
    return TransitionMatrix(Pm, r, lap)


def walk_weights(H: Hypergraph, weights: WeightConfig) -> WeightConfig:
    """Weights with delta'_V = r * delta_V, under which I - P is the general Laplacian."""
    T = build_transition(H, weights)
    exact = None
    sig = weights.sigma_exact(H)
    if sig is not None:
        exact = tuple(
            sum((sig[j] * (int(H.sizes[j]) - 1) for j in H.stars[i]), start=Fraction(0)) for i in range(H.n)
        )
    dv = T.r * weights.vertex
    if exact is not None:
        dv = np.array([float(x) for x in exact])
    return WeightConfig(dv, weights.edge, "custom", exact, weights.edge_exact if exact else None, weights.sizes)
