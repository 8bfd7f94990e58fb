"""Structured spectra assembled from units, twins and quotients, checked against a dense solve.

The structured route replaces one n x n eigenproblem by closed-form entries on
each unit plus an m x m eigenproblem on the unit quotient (m = number of
units). Every certificate is verified vector by vector against the dense
operator and, as a multiset, against :func:`dense_oracle`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import eigh

from .config import DEFAULT, Tolerances
from .core import Hypergraph, WeightConfig
from .errors import HypergraphError, HypothesisError
from .operators import (
    DenseOperator,
    OperatorKind,
    build_operator,
    build_quotient,
    faria_basis,
    faria_vector,
)
from .units import TwinClass, UnitPartition, are_twin_units, compute_units

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CertificateEntry:
    eigenvalue: float
    basis: np.ndarray  # shape (k, n), rows normalised to max-norm 1
    provenance: str  # unit_faria | twin_difference | quotient_blowup | closed_form
    label: str

    @property
    def multiplicity(self) -> int:
        return int(self.basis.shape[0])

    def as_dict(self, vertices=None) -> dict:
        return {
            "eigenvalue": float(self.eigenvalue),
            "multiplicity": self.multiplicity,
            "provenance": self.provenance,
            "label": self.label,
            "basis": [[float(x) for x in row] for row in self.basis],
        }


def make_entry(eigenvalue: float, vectors, provenance: str, label: str, n: int) -> CertificateEntry:
    rows = [np.asarray(v, dtype=float) for v in vectors]
    basis = np.zeros((0, n)) if not rows else np.vstack(rows)
    if basis.size:
        scale = np.abs(basis).max(axis=1, keepdims=True)
        basis = basis / np.where(scale > 0, scale, 1.0)
    basis.setflags(write=False)
    return CertificateEntry(float(eigenvalue), basis, provenance, label)


@dataclass(frozen=True, eq=False)
class SpectralCertificate:
    kind: str
    n: int
    entries: tuple

    @property
    def claimed_total(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    @property
    def complete(self) -> bool:
        return self.claimed_total == self.n

    def eigenvalues(self) -> np.ndarray:
        vals = [e.eigenvalue for e in self.entries for _ in range(e.multiplicity)]
        return np.sort(np.array(vals, dtype=float))

    def basis(self) -> np.ndarray:
        rows = [e.basis for e in self.entries if e.multiplicity]
        return np.vstack(rows) if rows else np.zeros((0, self.n))

    def residuals(self, T: DenseOperator) -> list[float]:
        return [entry_residual(T, e) for e in self.entries]

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "claimed_total": self.claimed_total,
            "entries": [e.as_dict() for e in self.entries],
        }


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    structured: np.ndarray
    oracle: np.ndarray
    max_pair_gap: float
    residuals: list
    rank: int
    operator_norm: float
    tolerances: Tolerances = field(default=DEFAULT)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def accepted(self) -> bool:
        t = self.tolerances
        return (
            len(self.structured) == len(self.oracle)
            and self.max_pair_gap <= t.pair_gap
            and self.max_residual <= t.residual * (1.0 + self.operator_norm)
            and self.rank == len(self.oracle)
        )

    def as_dict(self) -> dict:
        return {
            "structured": [float(x) for x in self.structured],
            "oracle": [float(x) for x in self.oracle],
            "max_pair_gap": float(self.max_pair_gap),
            "max_residual": float(self.max_residual),
            "residuals": [float(x) for x in self.residuals],
            "rank": int(self.rank),
            "operator_norm_inf": float(self.operator_norm),
            "accepted": bool(self.accepted),
        }


def entry_residual(T: DenseOperator, entry: CertificateEntry) -> float:
    if entry.multiplicity == 0:
        return 0.0
    R = entry.basis @ T.matrix.T - entry.eigenvalue * entry.basis
    return float(np.abs(R).max())


def max_pair_gap(a, b) -> float:
    a, b = np.sort(np.asarray(a, dtype=float)), np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        return float("inf")
    return float(np.abs(a - b).max()) if a.size else 0.0


# --- oracle ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OracleResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, in the original coordinates
    symmetry_residual: float


def dense_oracle(T: DenseOperator, tol: Tolerances = DEFAULT) -> OracleResult:
    """Symmetric eigensolve of D^{1/2} M D^{-1/2}; eigenvectors mapped back by D^{-1/2}."""
    d = np.sqrt(T.weights.vertex)
    S = d[:, None] * T.matrix / d[None, :]
    scale = max(1.0, float(np.abs(S).max())) if S.size else 1.0
    asym = float(np.abs(S - S.T).max()) / scale if S.size else 0.0
    if asym > tol.symmetry:
        raise HypergraphError(f"operator is not self-adjoint for delta_V (relative asymmetry {asym:.3e})")
    if T.n == 0:
        return OracleResult(np.zeros(0), np.zeros((0, 0)), 0.0)
    w, Z = eigh(0.5 * (S + S.T))
    return OracleResult(w, Z / d[:, None], asym)


def oracle_eigenvalues(H: Hypergraph, weights: WeightConfig, kind) -> np.ndarray:
    return dense_oracle(build_operator(H, weights, kind)).eigenvalues


# --- structured entries ------------------------------------------------------


def _unit_constant(weights: WeightConfig, members) -> float:
    vals = weights.vertex[list(members)]
    if np.ptp(vals) > DEFAULT.weight * max(1.0, vals.max()):
        raise HypothesisError("delta_V must be constant on every unit")
    return float(vals[0])


def unit_eigenvalue(H: Hypergraph, weights: WeightConfig, generators, c: float, kind) -> float:
    kind = OperatorKind.parse(kind)
    if kind is OperatorKind.Q:
        return 0.0
    idx = sorted(generators)
    de = weights.edge[idx]
    sz = H.sizes[idx].astype(float)
    if kind is OperatorKind.L:
        return float(np.sum(de / (c * sz)))
    return float(-np.sum(de / (c * sz**2)))


def unit_eigen_entries(H: Hypergraph, weights: WeightConfig, P: UnitPartition, kind) -> list[CertificateEntry]:
    kind = OperatorKind.parse(kind)
    out = []
    for k, u in enumerate(P.units):
        c = _unit_constant(weights, u.members)
        if u.size < 2:
            continue
        lam = unit_eigenvalue(H, weights, u.generators, c, kind)
        out.append(make_entry(lam, faria_basis(H.n, u.members), "unit_faria", f"W{k + 1}", H.n))
    return out


def twin_eigen_entries(
    H: Hypergraph, weights: WeightConfig, P: UnitPartition, classes: list[TwinClass], kind, tol: Tolerances = DEFAULT
) -> tuple[list[CertificateEntry], list[str]]:
    """Entries from twin classes; returns (entries, skipped-class diagnostics)."""
    kind = OperatorKind.parse(kind)
    sigma = weights.sigma(H)
    entries, skipped = [], []
    for p, cls in enumerate(classes):
        if cls.size < 2:
            continue
        verts = [i for u in cls.members for i in P.units[u].members]
        edges = sorted(set().union(*(P.units[u].generators for u in cls.members)))
        reasons = []
        dv = weights.vertex[verts]
        if np.ptp(dv) > tol.weight * max(1.0, dv.max()):
            reasons.append("delta_V not constant on the class")
        if edges and np.ptp(sigma[edges]) > tol.weight * max(1.0, sigma[edges].max()):
            reasons.append("sigma not constant on the class edges")
        if kind is not OperatorKind.L and not cls.equipotent:
            reasons.append("units not equipotent")
        if reasons:
            msg = f"class C{p + 1} skipped: " + ", ".join(reasons)
            log.warning(msg)
            skipped.append(msg)
            continue
        c = float(dv[0])
        w = float(sigma[edges[0]]) if edges else 0.0
        rep = cls.members[0]
        Erep = sorted(P.units[rep].generators)
        mrep = P.units[rep].size
        if kind is OperatorKind.L:
            lam = w / c * sum(int(H.sizes[e]) - mrep for e in Erep)
        elif kind is OperatorKind.A:
            lam = w / c * len(Erep) * (mrep - 1)
        else:
            lam = w / c * mrep * len(Erep)
        vecs = []
        Wi = P.units[rep].members
        for other in cls.members[1:]:
            Wj = P.units[other].members
            x = np.zeros(H.n)
            x[list(Wj)] = len(Wi)
            x[list(Wi)] = -len(Wj)
            vecs.append(x)
        entries.append(make_entry(lam, vecs, "twin_difference", f"C{p + 1}", H.n))
    return entries, skipped


def symmetric_quotient_eig(Q) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a unit quotient via its weighted symmetrisation."""
    s = np.sqrt(Q.inner_weights)
    M = Q.matrix
    S = s[:, None] * M / s[None, :]
    w, Z = eigh(0.5 * (S + S.T))
    return w, Z / s[:, None]


def quotient_eigen_entries(H: Hypergraph, weights: WeightConfig, P: UnitPartition, kind) -> list[CertificateEntry]:
    Qt = build_quotient(H, weights, P, kind)
    w, Y = symmetric_quotient_eig(Qt)
    out = []
    for k in range(P.m):
        y = np.zeros(H.n)
        for i, u in enumerate(P.units):
            y[list(u.members)] = Y[i, k]
        out.append(make_entry(w[k], [y], "quotient_blowup", f"q{k + 1}", H.n))
    return out


def certificate_report(T: DenseOperator, cert: SpectralCertificate, tol: Tolerances = DEFAULT) -> SpectrumReport:
    oracle = dense_oracle(T, tol).eigenvalues
    structured = cert.eigenvalues()
    basis = cert.basis()
    rank = int(np.linalg.matrix_rank(basis, tol=tol.rank)) if basis.size else 0
    return SpectrumReport(
        structured, oracle, max_pair_gap(structured, oracle), cert.residuals(T), rank, T.norm_inf(), tol
    )


def assemble_full_spectrum(
    H: Hypergraph, weights: WeightConfig, kind, P: UnitPartition | None = None, tol: Tolerances = DEFAULT
) -> tuple[SpectralCertificate, SpectrumReport]:
    """Unit Faria entries plus quotient blow-ups; n eigenpairs in total."""
    kind = OperatorKind.parse(kind)
    weights.check(H)
    P = P or compute_units(H)
    entries = unit_eigen_entries(H, weights, P, kind) + quotient_eigen_entries(H, weights, P, kind)
    cert = SpectralCertificate(kind.value, H.n, tuple(entries))
    return cert, certificate_report(build_operator(H, weights, kind), cert, tol)


def unit_constant_independence(H: Hypergraph, weights: WeightConfig, P: UnitPartition, kind) -> float:
    """Largest spread of (T x_uv)(v) over all pairs u, v of each unit; zero when representatives do not matter."""
    T = build_operator(H, weights, kind).matrix
    spread = 0.0
    for u in P.units:
        vals = [(T @ faria_vector(H.n, a, b))[b] for a, b in combinations(u.members, 2)]
        vals += [-(T @ faria_vector(H.n, a, b))[a] for a, b in combinations(u.members, 2)]
        if vals:
            spread = max(spread, max(vals) - min(vals))
    return spread


# --- converse extraction -----------------------------------------------------


def _membership_classes(T: np.ndarray, lam: float, n: int, tol: float) -> list[tuple]:
    """Classes of u ~ v iff (T - lam) x_uv vanishes; transitivity asserted."""
    rel = np.zeros((n, n), dtype=bool)
    np.fill_diagonal(rel, True)
    for u, v in combinations(range(n), 2):
        x = faria_vector(n, u, v)
        if np.abs(T @ x - lam * x).max() <= tol:
            rel[u, v] = rel[v, u] = True
    seen, classes = set(), []
    for u in range(n):
        if u in seen:
            continue
        cls = tuple(int(v) for v in np.flatnonzero(rel[u]))
        for a, b in combinations(cls, 2):
            assert rel[a, b], "Faria membership relation is not transitive"
        seen.update(cls)
        if len(cls) >= 2:
            classes.append(cls)
    return classes


def extract_units_from_kernel(H: Hypergraph, weights: WeightConfig, tol: Tolerances = DEFAULT) -> list[tuple]:
    """Vertex classes whose Faria vectors lie in ker Q; each must be a unit of size >= 2."""
    T = build_operator(H, weights, OperatorKind.Q)
    classes = _membership_classes(T.matrix, 0.0, H.n, tol.membership * (1.0 + T.norm_inf()))
    units = {u.members for u in compute_units(H).units if u.size >= 2}
    for cls in classes:
        assert cls in units, f"kernel class {cls} is not a unit"
    return classes


@dataclass(frozen=True)
class EigenspaceStructure:
    members: tuple
    verdicts: dict


def extract_structures_from_eigenspace(
    H: Hypergraph, weights: WeightConfig, kind, lam: float, tol: Tolerances = DEFAULT
) -> list[EigenspaceStructure]:
    """Maximal sets U with S_U inside the lam-eigenspace, with the detector verdicts that apply."""
    from .detectors import AlphaWeighting, classify_set

    kind = OperatorKind.parse(kind)
    T = build_operator(H, weights, kind)
    spec = dense_oracle(T, tol).eigenvalues
    scale = 1.0 + T.norm_inf()
    if spec.size == 0 or np.abs(spec - lam).min() > tol.eigenvalue * scale:
        raise HypergraphError(f"{lam!r} is not an eigenvalue of {kind.value}")
    lam = float(spec[np.argmin(np.abs(spec - lam))])
    classes = _membership_classes(T.matrix, lam, H.n, tol.membership * scale)
    P = compute_units(H)
    sigma = AlphaWeighting.sigma(H, weights)
    eta = AlphaWeighting.eta(H, weights)
    dv_global = np.ptp(weights.vertex) <= tol.weight * weights.vertex.max()
    out = []
    for cls in classes:
        names = [H.vertices[i] for i in cls]
        vs = classify_set(H, names, sigma, P)
        verdicts = {"unit_saturated": vs.unit_saturated}
        assert vs.unit_saturated, f"eigenspace set {names} is not unit-saturated"
        dv_const = np.ptp(weights.vertex[list(cls)]) <= tol.weight * weights.vertex.max()
        if kind is OperatorKind.A:
            verdicts["sigma_symmetric"] = vs.symmetric is not None
        elif kind is OperatorKind.L and dv_const:
            verdicts["sigma_symmetric"] = vs.symmetric is not None
            verdicts["eta_regular"] = classify_set(H, names, eta, P).regular is not None
        elif kind is OperatorKind.Q and dv_global:
            verdicts["sigma_coregular"] = vs.coregular is not None
        out.append(EigenspaceStructure(cls, verdicts))
    return out


# --- co-spectral construction ------------------------------------------------


@dataclass(frozen=True)
class CospectralVerdict:
    cospectral: bool
    reason: str
    quotient_gap: float
    full_gap: float | None


def cospectral_sufficient(
    H1: Hypergraph, w1: WeightConfig, H2: Hypergraph, w2: WeightConfig, tol: Tolerances = DEFAULT
) -> CospectralVerdict:
    """Equal |V|, equal multisets of unit sizes and co-spectral unit quotients of Q."""
    P1, P2 = compute_units(H1), compute_units(H2)
    q1 = symmetric_quotient_eig(build_quotient(H1, w1, P1, "Q"))[0]
    q2 = symmetric_quotient_eig(build_quotient(H2, w2, P2, "Q"))[0]
    gap = max_pair_gap(q1, q2)
    if H1.n != H2.n:
        return CospectralVerdict(False, "vertex counts differ", gap, None)
    if sorted(P1.sizes().tolist()) != sorted(P2.sizes().tolist()):
        return CospectralVerdict(False, "unit size multisets differ", gap, None)
    if gap > tol.cospectral:
        return CospectralVerdict(False, "quotient spectra differ", gap, None)
    full = max_pair_gap(oracle_eigenvalues(H1, w1, "Q"), oracle_eigenvalues(H2, w2, "Q"))
    assert full <= tol.cospectral * max(1.0, float(np.abs(q1).max(initial=0.0))), "co-spectral quotients but full spectra differ"
    return CospectralVerdict(True, "unit sizes and quotient spectra agree", gap, full)
