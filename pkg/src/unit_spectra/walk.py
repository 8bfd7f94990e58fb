"""Random walks driven by the transition matrix P of a weighted hypergraph.

Exact first-hitting distributions come from absorbing-state propagation;
Monte Carlo runs are a secondary check. The RNG is numpy's PCG64 seeded with
a 64-bit integer; each step inverts the cumulative row distribution with one
uniform draw, so a seed fixes the trajectory.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import DEFAULT, Tolerances
from .core import Hypergraph, WeightConfig
from .errors import HypergraphError
from .operators import TransitionMatrix, build_operator, build_transition, walk_weights
from .spectra import SpectralCertificate, SpectrumReport, assemble_full_spectrum, make_entry, max_pair_gap
from .units import TwinClass, UnitPartition, are_twin_units

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WalkModel:
    H: Hypergraph
    weights: WeightConfig
    transition: TransitionMatrix

    @classmethod
    def build(cls, H: Hypergraph, weights: WeightConfig) -> "WalkModel":
        return cls(H, weights, build_transition(H, weights))

    @property
    def P(self) -> np.ndarray:
        return self.transition.matrix

    def position(self, v) -> int:
        return self.H.vertex_position(v)


@dataclass(frozen=True, eq=False)
class HittingProfile:
    source: object
    target: object
    probabilities: np.ndarray  # index t-1 holds Prob(T = t)
    expected: float

    def as_dict(self) -> dict:
        return {
            "source": str(self.source),
            "target": str(self.target),
            "probabilities": [float(x) for x in self.probabilities],
            "expected": None if not np.isfinite(self.expected) else float(self.expected),
            "reachable": bool(np.isfinite(self.expected)),
        }


def _hitting_index(P: np.ndarray, u: int, v: int, t_max: int) -> np.ndarray:
    x = np.zeros(P.shape[0])
    x[u] = 1.0
    out = np.empty(t_max)
    for t in range(t_max):
        x = x @ P
        out[t] = x[v]
        x[v] = 0.0
    return out


def absorption_probability(P: np.ndarray, v: int) -> np.ndarray:
    """Probability of ever reaching v from each state (1 at v itself)."""
    n = P.shape[0]
    # states that can reach v at all
    reach = np.zeros(n, dtype=bool)
    reach[v] = True
    frontier = [v]
    while frontier:
        w = frontier.pop()
        for s in np.flatnonzero(P[:, w] > 0):
            if not reach[s]:
                reach[s] = True
                frontier.append(s)
    h = np.zeros(n)
    h[v] = 1.0
    idx = np.flatnonzero(reach & (np.arange(n) != v))
    if idx.size:
        A = np.eye(idx.size) - P[np.ix_(idx, idx)]
        h[idx] = np.linalg.solve(A, P[idx, v])
    return h


def expected_hitting_times(P: np.ndarray, v: int, tol: float = 1e-12) -> np.ndarray:
    """ET(u, v) for every u != v; +inf where v is not reached almost surely."""
    n = P.shape[0]
    h = absorption_probability(P, v)
    sure = np.abs(h - 1.0) <= 1e-9
    sure[v] = False
    et = np.full(n, np.inf)
    et[v] = 0.0
    idx = np.flatnonzero(sure)
    if idx.size:
        # from a sure state the walk never leaves the sure set, so restrict
        A = np.eye(idx.size) - P[np.ix_(idx, idx)]
        et[idx] = np.linalg.solve(A, np.ones(idx.size))
    return et


def hitting_distribution(model: WalkModel, u, v, t_max: int = 50) -> HittingProfile:
    iu, iv = model.position(u), model.position(v)
    if iu == iv:
        raise HypergraphError("hitting distribution needs distinct source and target")
    probs = _hitting_index(model.P, iu, iv, t_max)
    et = expected_hitting_times(model.P, iv)[iu]
    return HittingProfile(u, v, probs, float(et))


def walk_spectrum(H: Hypergraph, weights: WeightConfig, tol: Tolerances = DEFAULT) -> tuple[SpectralCertificate, SpectrumReport]:
    """Spectrum of P from the structured spectrum of L under delta'_V = r delta_V.

    r delta_V only depends on the star, so it is constant on every unit and
    the structured route always applies. The oracle symmetrises P itself.
    """
    wprime = walk_weights(H, weights)
    cert_L, _ = assemble_full_spectrum(H, wprime, "L", tol=tol)
    entries = tuple(make_entry(1.0 - e.eigenvalue, e.basis, e.provenance, e.label, H.n) for e in cert_L.entries)
    cert = SpectralCertificate("P", H.n, entries)
    T = build_transition(H, weights)
    d = np.sqrt(wprime.vertex)
    S = d[:, None] * T.matrix / d[None, :]
    oracle = np.linalg.eigvalsh(0.5 * (S + S.T))
    norm = float(np.abs(T.matrix).sum(axis=1).max())
    residuals = [float(np.abs(e.basis @ T.matrix.T - e.eigenvalue * e.basis).max()) if e.multiplicity else 0.0 for e in entries]
    basis = cert.basis()
    report = SpectrumReport(
        cert.eigenvalues(), np.sort(oracle), max_pair_gap(cert.eigenvalues(), oracle), residuals,
        int(np.linalg.matrix_rank(basis, tol=tol.rank)), norm, tol,
    )
    return cert, report


@dataclass
class TwinHittingReport:
    checked: list = field(default_factory=list)  # (unit i, unit j)
    skipped: list = field(default_factory=list)  # diagnostics
    max_gap: float = 0.0
    t_max: int = 0

    def ok(self, tol: float = DEFAULT.identity) -> bool:
        return self.max_gap <= tol


def _twin_pair_hypotheses(model: WalkModel, P: UnitPartition, i: int, j: int, tol: Tolerances) -> list[str]:
    H, w = model.H, model.weights
    Wi, Wj = P.units[i].members, P.units[j].members
    reasons = []
    if len(Wi) != len(Wj):
        reasons.append("units are not equipotent")
        return reasons
    if np.any(np.abs(w.vertex[list(Wi)] - w.vertex[list(Wj)]) > tol.weight * w.vertex.max()):
        reasons.append("vertex bijection does not preserve delta_V")
    f = are_twin_units(H, P, i, j)
    if f is None:
        reasons.append("units are not twins")
    elif any(abs(w.edge[e] - w.edge[g]) > tol.weight * w.edge.max() for e, g in f.items()):
        reasons.append("canonical bijection does not preserve delta_E")
    return reasons


def twin_hitting_check(
    model: WalkModel, P: UnitPartition, classes: list[TwinClass], t_max: int = 50, tol: Tolerances = DEFAULT
) -> TwinHittingReport:
    """Compare Prob(T^u_{u1} = t) with Prob(T^u_{h(u1)} = t) across twin pairs."""
    rep = TwinHittingReport(t_max=t_max)
    for c in classes:
        for a in range(len(c.members)):
            for b in range(a + 1, len(c.members)):
                i, j = c.members[a], c.members[b]
                reasons = _twin_pair_hypotheses(model, P, i, j, tol)
                if reasons:
                    rep.skipped.append(f"W{i + 1}/W{j + 1}: " + ", ".join(reasons))
                    continue
                Wi, Wj = P.units[i].members, P.units[j].members
                outside = [u for u in range(model.H.n) if u not in Wi and u not in Wj]
                for u1, u2 in zip(Wi, Wj):
                    for u in outside:
                        d1 = _hitting_index(model.P, u, u1, t_max)
                        d2 = _hitting_index(model.P, u, u2, t_max)
                        rep.max_gap = max(rep.max_gap, float(np.abs(d1 - d2).max()))
                rep.checked.append((i, j))
    for msg in rep.skipped:
        log.warning("twin hitting check skipped %s", msg)
    return rep


def simulate(model: WalkModel, start, steps: int, seed: int) -> list:
    """Trajectory of vertex labels, ``steps + 1`` long, reproducible for a fixed seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    uniforms = rng.random(steps)
    cum = _kernels.cumulative_rows(model.P)
    path = _kernels.trajectory(cum, model.position(start), uniforms)
    return [model.H.vertices[i] for i in path]


def simulate_first_hits(model: WalkModel, u, v, t_max: int, runs: int, seed: int) -> np.ndarray:
    """First-hit step of each run (0 when v is not hit within t_max)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    uniforms = rng.random((runs, t_max))
    cum = _kernels.cumulative_rows(model.P)
    return _kernels.first_hit_times(cum, model.position(u), model.position(v), uniforms)


def empirical_hitting(model: WalkModel, u, v, t_max: int, runs: int, seed: int) -> np.ndarray:
    hits = simulate_first_hits(model, u, v, t_max, runs, seed)
    counts = np.bincount(hits, minlength=t_max + 1)[1:]
    return counts / runs


def laplacian_gap(H: Hypergraph, weights: WeightConfig) -> float:
    """Entrywise distance between I - P and L under delta'_V = r delta_V."""
    T = build_transition(H, weights)
    L = build_operator(H, walk_weights(H, weights), "L").matrix
    return float(np.abs(T.laplacian - L).max())
