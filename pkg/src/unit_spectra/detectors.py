"""Regular, symmetric, unit-saturated and co-regular vertex sets.

For an edge weighting alpha and a vertex set U:

* regular: the star sum of alpha is the same for every u in U;
* symmetric: for every vertex v, the sum of alpha over the edges containing
  both u and v is the same for every u in U other than v;
* unit-saturated: every unit lies inside U or misses it;
* co-regular: saturated, symmetric, and for all u, v in U the alpha-mass of
  E_u minus E_v equals that of E_v minus E_u.

Comparisons are exact when alpha carries rational values (preset weights).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .config import DEFAULT, Tolerances
from .core import Hypergraph, WeightConfig
from .errors import HypergraphError, HypothesisError
from .operators import build_operator, faria_basis
from .spectra import CertificateEntry, entry_residual, make_entry
from .units import UnitPartition, compute_units


@dataclass(frozen=True, eq=False)
class AlphaWeighting:
    tag: str
    values: np.ndarray
    exact: tuple | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        # eta vanishes on singleton edges, every other weighting is strictly positive
        if np.any(vals < 0) or (self.tag != "eta" and np.any(vals == 0)):
            raise HypergraphError("edge weighting must be strictly positive")
        object.__setattr__(self, "values", vals)

    def value(self, j: int):
        return self.exact[j] if self.exact is not None else float(self.values[j])

    @classmethod
    def sigma(cls, H: Hypergraph, weights: WeightConfig) -> "AlphaWeighting":
        return cls("sigma", weights.sigma(H), weights.sigma_exact(H))

    @classmethod
    def rho(cls, H: Hypergraph, weights: WeightConfig) -> "AlphaWeighting":
        ex = None
        if weights.edge_exact is not None:
            ex = tuple(d / int(k) for d, k in zip(weights.edge_exact, H.sizes))
        return cls("rho", weights.rho(H), ex)

    @classmethod
    def eta(cls, H: Hypergraph, weights: WeightConfig) -> "AlphaWeighting":
        ex = None
        sig = weights.sigma_exact(H)
        if sig is not None:
            ex = tuple(s * (int(k) - 1) for s, k in zip(sig, H.sizes))
        return cls("eta", weights.eta(H), ex)

    @classmethod
    def constant_one(cls, H: Hypergraph) -> "AlphaWeighting":
        return cls("constant_one", np.ones(H.m), tuple(Fraction(1) for _ in range(H.m)))

    @classmethod
    def custom(cls, values) -> "AlphaWeighting":
        return cls("custom", np.asarray(values, dtype=float))

    @classmethod
    def by_tag(cls, tag: str, H: Hypergraph, weights: WeightConfig) -> "AlphaWeighting":
        table = {
            "sigma": lambda: cls.sigma(H, weights),
            "rho": lambda: cls.rho(H, weights),
            "eta": lambda: cls.eta(H, weights),
            "constant_one": lambda: cls.constant_one(H),
            "one": lambda: cls.constant_one(H),
        }
        if tag not in table:
            raise HypergraphError(f"unknown edge weighting {tag!r}")
        return table[tag]()


@dataclass(frozen=True)
class StructureVerdict:
    regular: object | None  # common star sum w
    symmetric: dict | None  # vertex label -> c^v_U
    unit_saturated: bool
    coregular: object | None  # common pair sum s

    def as_dict(self) -> dict:
        return {
            "regular": None if self.regular is None else float(self.regular),
            "symmetric": None if self.symmetric is None else {str(k): float(v) for k, v in self.symmetric.items()},
            "unit_saturated": self.unit_saturated,
            "coregular": None if self.coregular is None else float(self.coregular),
        }


def _all_equal(vals, exact: bool, tol: Tolerances) -> bool:
    if len(vals) <= 1:
        return True
    if exact:
        return all(v == vals[0] for v in vals[1:])
    arr = np.array([float(v) for v in vals])
    return float(np.ptp(arr)) <= tol.weight


def classify_set(H: Hypergraph, U, alpha: AlphaWeighting, P: UnitPartition, tol: Tolerances = DEFAULT) -> StructureVerdict:
    idx = sorted({H.vertex_position(v) for v in U})
    if not idx:
        raise HypergraphError("cannot classify an empty vertex set")
    exact = alpha.exact is not None
    zero = Fraction(0) if exact else 0.0
    a = [alpha.value(j) for j in range(H.m)]
    stars = H.stars

    def mass(edges):
        return sum((a[j] for j in edges), start=zero)

    star_sums = [mass(stars[u]) for u in idx]
    regular = star_sums[0] if _all_equal(star_sums, exact, tol) else None

    symmetric: dict | None = {}
    for v in range(H.n):
        others = [u for u in idx if u != v]
        if not others:
            continue
        vals = [mass(stars[u] & stars[v]) for u in others]
        if not _all_equal(vals, exact, tol):
            symmetric = None
            break
        symmetric[H.vertices[v]] = vals[0]

    inside = set(idx)
    saturated = all(set(u.members) <= inside or not (set(u.members) & inside) for u in P.units)

    coregular = None
    if saturated and symmetric is not None:
        balanced = all(
            _all_equal([mass(stars[u] - stars[v]), mass(stars[v] - stars[u])], exact, tol) for u, v in combinations(idx, 2)
        )
        if balanced:
            if len(idx) == 1:
                coregular = star_sums[0]
            else:
                pair = [mass(stars[u] & stars[v]) for u, v in combinations(idx, 2)]
                assert _all_equal(pair, exact, tol), "pair sums of a symmetric set are not constant"
                coregular = pair[0]
    return StructureVerdict(regular, symmetric, saturated, coregular)


def coregular_eigenvalues(
    H: Hypergraph, weights: WeightConfig, U, verdict: StructureVerdict | None = None, P: UnitPartition | None = None,
    tol: Tolerances = DEFAULT,
) -> dict[str, CertificateEntry]:
    """Closed-form A, L and Q eigenvalues carried by S_U for a sigma-co-regular U.

    A: -s/c, Q: (w_sigma - s)/c, and, when U is also rho-regular,
    L: (w_rho - w_sigma + s)/c, where c is the common delta_V on U.
    """
    P = P or compute_units(H)
    idx = sorted({H.vertex_position(v) for v in U})
    sig = AlphaWeighting.sigma(H, weights)
    verdict = verdict or classify_set(H, U, sig, P, tol)
    failures = []
    if verdict.coregular is None:
        failures.append("U is not sigma-co-regular")
    if verdict.regular is None:
        failures.append("U is not sigma-regular")
    dv = weights.vertex[idx]
    if np.ptp(dv) > tol.weight * dv.max():
        failures.append("delta_V is not constant on U")
    if failures:
        raise HypothesisError("co-regular eigenvalues unavailable", failures)
    c = float(dv[0])
    s = float(verdict.coregular)
    w_sigma = float(verdict.regular)
    basis = faria_basis(H.n, idx)
    out = {
        "A": make_entry(-s / c, basis, "closed_form", "coregular:A", H.n),
        "Q": make_entry((w_sigma - s) / c, basis, "closed_form", "coregular:Q", H.n),
    }
    rho_v = classify_set(H, U, AlphaWeighting.rho(H, weights), P, tol)
    if rho_v.regular is not None:
        out["L"] = make_entry((float(rho_v.regular) - w_sigma + s) / c, basis, "closed_form", "coregular:L", H.n)
    for kind, entry in out.items():
        T = build_operator(H, weights, kind)
        res = entry_residual(T, entry)
        if res > tol.residual * (1.0 + T.norm_inf()):
            raise HypothesisError(f"co-regular {kind} eigenpair fails the residual check ({res:.3e})")
    return out
