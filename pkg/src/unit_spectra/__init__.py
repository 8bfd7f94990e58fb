"""Units, twin units and certified spectra of weighted hypergraphs."""

from .core import (
    Hyperedge,
    Hypergraph,
    WeightConfig,
    is_connected,
    is_simple,
    parse_hypergraph,
    preset_weights,
    serialize_hypergraph,
    star,
    star_of_set,
)
from .errors import HypergraphError, HypothesisError
from .operators import OperatorKind, build_operator, build_quotient, build_transition, check_compatibility
from .spectra import assemble_full_spectrum, dense_oracle
from .units import compute_units, twin_classes, twin_contraction, unit_contraction, unit_neighbours

__version__ = "0.1.0"

__all__ = [
    "Hyperedge",
    "Hypergraph",
    "HypergraphError",
    "HypothesisError",
    "OperatorKind",
    "WeightConfig",
    "assemble_full_spectrum",
    "build_operator",
    "build_quotient",
    "build_transition",
    "check_compatibility",
    "compute_units",
    "dense_oracle",
    "is_connected",
    "is_simple",
    "parse_hypergraph",
    "preset_weights",
    "serialize_hypergraph",
    "star",
    "star_of_set",
    "twin_classes",
    "twin_contraction",
    "unit_contraction",
    "unit_neighbours",
]
