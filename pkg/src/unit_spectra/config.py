"""Central numerical tolerances.

Every threshold used by the library lives here so that reports can embed
the exact values they were produced with.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # exact identities between matrices built from the same sums
    identity: float = 1e-12
    # relative asymmetry allowed in D_V * M before the oracle refuses
    symmetry: float = 1e-10
    # per-vector residual, scaled by (1 + ||T||_inf)
    residual: float = 1e-9
    # structured vs oracle multiset, positional pairing
    pair_gap: float = 1e-8
    # Faria-vector membership in an eigenspace, scaled by (1 + ||T||_inf)
    membership: float = 1e-8
    # eigenvalue lookup and clustering
    eigenvalue: float = 1e-8
    # quotient spectra comparison in the co-spectral test
    cospectral: float = 1e-9
    # weight equalities when no exact rational values are available
    weight: float = 1e-12
    # rank of the combined basis
    rank: float = 1e-8

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    def scaled(self, factor: float) -> "Tolerances":
        return replace(self, **{k: v * factor for k, v in asdict(self).items()})


DEFAULT = Tolerances()
