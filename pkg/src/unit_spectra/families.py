"""Hyperflowers, k-layer flowers and a small random sampler.

A hyperflower (l, r, t, m) has l peripheral t-sets U_1..U_l, r central m-sets
e_1..e_r and the l*r edges e_k | U_i. A k-layer flower has a periphery
{u1, u2, u3}, centres v_1..v_k and, for each centre, the three triangles
u1u2v_i, u2u3v_i, u3u1v_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .core import Hypergraph, WeightConfig, is_connected, is_simple, preset_weights
from .errors import HypergraphError, HypothesisError
from .operators import OperatorKind, faria_basis
from .spectra import CertificateEntry, SpectralCertificate, make_entry


@dataclass(frozen=True)
class HyperflowerSpec:
    l: int
    r: int
    t: int
    m: int

    def __post_init__(self):
        for name in ("l", "r", "t", "m"):
            if int(getattr(self, name)) < 1:
                raise HypergraphError(f"hyperflower parameter {name} must be a positive integer")


@dataclass(frozen=True)
class HyperflowerLabels:
    peripheral: tuple  # U_i as tuples of vertex labels
    central: tuple  # e_k as tuples of vertex labels
    edge_names: dict  # (k, i) -> edge name


@dataclass(frozen=True)
class MultiLayerSpec:
    k: int

    def __post_init__(self):
        if int(self.k) < 1:
            raise HypergraphError("k-layer flower needs k >= 1")


@dataclass(frozen=True)
class MultiLayerLabels:
    periphery: tuple
    centres: tuple


def make_hyperflower(spec: HyperflowerSpec) -> tuple[Hypergraph, HyperflowerLabels]:
    U = tuple(tuple(f"u{i + 1}_{s + 1}" for s in range(spec.t)) for i in range(spec.l))
    C = tuple(tuple(f"v{k + 1}_{s + 1}" for s in range(spec.m)) for k in range(spec.r))
    vertices = [v for comp in U for v in comp] + [v for comp in C for v in comp]
    edges, names = {}, {}
    for k in range(spec.r):
        for i in range(spec.l):
            name = f"e{k + 1}_{i + 1}"
            edges[name] = C[k] + U[i]
            names[(k, i)] = name
    return Hypergraph.from_edges(vertices, edges), HyperflowerLabels(U, C, names)


def _constant(values, what: str, tol: Tolerances) -> float:
    values = np.asarray(values, dtype=float)
    if values.size and np.ptp(values) > tol.weight * max(1.0, values.max()):
        raise HypothesisError(f"{what} must be constant")
    return float(values[0])


def hyperflower_closed_spectrum(
    spec: HyperflowerSpec, weights: WeightConfig | None = None, kind="Q", tol: Tolerances = DEFAULT
) -> SpectralCertificate:
    """All l*t + r*m eigenpairs from closed forms; labelled components, not detected classes."""
    kind = OperatorKind.parse(kind)
    H, lab = make_hyperflower(spec)
    weights = weights or preset_weights(H, "R")
    weights.check(H)
    w = _constant(weights.sigma(H), "sigma", tol)
    c = _constant(weights.vertex, "delta_V", tol)
    l, r, t, m = spec.l, spec.r, spec.t, spec.m
    n = H.n
    idx = H.index
    a = w / c
    entries: list[CertificateEntry] = []

    def ind(comps):
        x = np.zeros(n)
        for comp in comps:
            x[[idx[v] for v in comp]] = 1.0
        return x

    # (i) inside each component
    if kind is OperatorKind.Q:
        per, cen = 0.0, 0.0
    elif kind is OperatorKind.A:
        per, cen = -a * r, -a * l
    else:
        per, cen = a * r * (t + m), a * l * (t + m)
    for i, comp in enumerate(lab.peripheral):
        if t > 1:
            entries.append(make_entry(per, faria_basis(n, [idx[v] for v in comp]), "closed_form", f"unit:U{i + 1}", n))
    for k, comp in enumerate(lab.central):
        if m > 1:
            entries.append(make_entry(cen, faria_basis(n, [idx[v] for v in comp]), "closed_form", f"unit:e{k + 1}", n))

    # (ii) differences of twin components
    if kind is OperatorKind.A:
        tw_p, tw_c = a * r * (t - 1), a * l * (m - 1)
    elif kind is OperatorKind.L:
        tw_p, tw_c = a * r * m, a * l * t
    else:
        tw_p, tw_c = a * r * t, a * l * m
    if l > 1:
        vecs = [ind([lab.peripheral[i]]) - ind([lab.peripheral[0]]) for i in range(1, l)]
        entries.append(make_entry(tw_p, vecs, "closed_form", "twin:peripheral", n))
    if r > 1:
        vecs = [ind([lab.central[k]]) - ind([lab.central[0]]) for k in range(1, r)]
        entries.append(make_entry(tw_c, vecs, "closed_form", "twin:central", n))

    # (iii) the two vectors constant on the periphery and on the centre
    chiU, chiW = ind(lab.peripheral), ind(lab.central)
    if kind is OperatorKind.A:
        for g in hyperflower_roots(spec):
            entries.append(make_entry(a * r * (t - 1 + m * g), [g * chiW + chiU], "closed_form", f"quadratic:{g:+.6g}", n))
    elif kind is OperatorKind.L:
        entries.append(make_entry(0.0, [chiU + chiW], "closed_form", "constant", n))
        entries.append(make_entry(a * (l * t + r * m), [(r * m) * chiU - (l * t) * chiW], "closed_form", "lt+rm", n))
    else:
        entries.append(make_entry(a * (l * m + r * t), [l * chiW + r * chiU], "closed_form", "lm+rt", n))
        z = np.zeros(n)
        for comp in lab.peripheral:
            z[idx[comp[0]]] += 1.0
        for comp in lab.central:
            z[idx[comp[0]]] -= 1.0
        entries.append(make_entry(0.0, [z], "closed_form", "z", n))
    return SpectralCertificate(kind.value, n, tuple(entries))


def hyperflower_roots(spec: HyperflowerSpec) -> tuple[float, float]:
    """Roots of r m x^2 + [r(t-1) - l(m-1)] x - l t = 0."""
    l, r, t, m = spec.l, spec.r, spec.t, spec.m
    A, B, C = r * m, r * (t - 1) - l * (m - 1), -l * t
    disc = B * B - 4 * A * C
    root = np.sqrt(disc)
    # numerically stable pair
    q = -0.5 * (B + np.copysign(root, B if B != 0 else 1.0))
    return float(q / A), float(C / q)


def make_multilayer(spec: MultiLayerSpec) -> tuple[Hypergraph, MultiLayerLabels]:
    U = ("u1", "u2", "u3")
    V = tuple(f"v{i + 1}" for i in range(spec.k))
    edges = {}
    for i, v in enumerate(V):
        edges[f"e{i + 1}_12"] = ("u1", "u2", v)
        edges[f"e{i + 1}_23"] = ("u2", "u3", v)
        edges[f"e{i + 1}_31"] = ("u3", "u1", v)
    return Hypergraph.from_edges(U + V, edges), MultiLayerLabels(U, V)


def multilayer_closed_spectrum(
    spec: MultiLayerSpec, kind, c_U: float, c_V: float, f3: float, weights: WeightConfig | None = None,
    tol: Tolerances = DEFAULT,
) -> list[CertificateEntry]:
    """The periphery entry (multiplicity 2) and the centre entry (multiplicity k - 1)."""
    kind = OperatorKind.parse(kind)
    H, lab = make_multilayer(spec)
    k = spec.k
    if weights is not None:
        weights.check(H)
        bad = []
        if np.any(np.abs(weights.edge - f3) > tol.weight * max(1.0, f3)):
            bad.append("delta_E differs from f(3)")
        if np.any(np.abs(weights.vertex[:3] - c_U) > tol.weight * max(1.0, c_U)):
            bad.append("delta_V differs from c_U on the periphery")
        if np.any(np.abs(weights.vertex[3:] - c_V) > tol.weight * max(1.0, c_V)):
            bad.append("delta_V differs from c_V on the centre")
        if bad:
            raise HypothesisError("weights do not match the k-layer parameters", bad)
    if kind is OperatorKind.A:
        per, cen = -k / (9 * c_U) * f3, 0.0
    elif kind is OperatorKind.L:
        per, cen = 5 * k / (9 * c_U) * f3, 2 / (3 * c_V) * f3
    else:
        per, cen = k / (9 * c_U) * f3, 1 / (3 * c_V) * f3
    n = H.n
    out = [make_entry(per, faria_basis(n, [0, 1, 2]), "closed_form", "periphery", n)]
    if k > 1:
        out.append(make_entry(cen, faria_basis(n, range(3, 3 + k)), "closed_form", "centre", n))
    return out


def multilayer_parameters(H: Hypergraph, weights: WeightConfig) -> tuple[float, float, float]:
    """(c_U, c_V, f(3)) read off weights on a k-layer flower."""
    return float(weights.vertex[0]), float(weights.vertex[3]) if H.n > 3 else float("nan"), float(weights.edge[0])


# --- random sampler ----------------------------------------------------------


def random_hypergraph(
    rng: np.random.Generator,
    n_max: int = 12,
    m_max: int = 8,
    min_size: int = 1,
    max_size: int | None = None,
    allow_isolated: bool = True,
    n_min: int = 2,
) -> Hypergraph:
    """Uniformly sized random instance with distinct edges.

    Edges are drawn as uniform random subsets; small edge counts relative to
    n produce nontrivial units naturally.
    """
    n = int(rng.integers(max(n_min, min_size), n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    hi = min(n, max_size or n)
    edges: list[frozenset] = []
    attempts = 0
    while len(edges) < m and attempts < 50 * m:
        attempts += 1
        k = int(rng.integers(min_size, hi + 1))
        e = frozenset(int(x) for x in rng.choice(n, size=k, replace=False))
        if e not in edges:
            edges.append(e)
    if not allow_isolated:
        covered = set().union(*edges)
        missing = [v for v in range(n) if v not in covered]
        while missing:
            v = missing.pop()
            k = int(rng.integers(max(min_size, 2), max(hi, 2) + 1)) if n > 1 else 1
            others = [u for u in range(n) if u != v]
            pick = rng.choice(others, size=min(k - 1, len(others)), replace=False) if others else []
            e = frozenset([v, *map(int, pick)])
            if e not in edges:
                edges.append(e)
            else:
                missing.append(v)
            covered |= e
            missing = [u for u in missing if u not in covered]
    vertices = [str(i + 1) for i in range(n)]
    return Hypergraph.from_edges(vertices, [[str(i + 1) for i in sorted(e)] for e in edges])


def random_simple_connected(rng: np.random.Generator, n_max: int = 10, m_max: int = 6, min_size: int = 2) -> Hypergraph:
    """Rejection sampler for simple connected instances with at least two edges."""
    while True:
        H = random_hypergraph(rng, n_max=n_max, m_max=m_max, min_size=min_size, n_min=3)
        if H.m > 1 and is_simple(H) and is_connected(H):
            return H

