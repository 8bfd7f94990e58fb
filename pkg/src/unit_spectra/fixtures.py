"""Bundled example hypergraphs.

``fig1_caption`` lists the running example exactly as drawn (18 vertices).
``fig1`` is the same example with the two member lists of e6 and e7 made
consistent with its stated units (vertex 16 dropped, 7 read as 17); it is the
instance used for unit, twin and spectral checks.
"""

from __future__ import annotations

from importlib import resources

from .core import Hypergraph, parse_hypergraph

NAMES = ("fig1", "fig1_caption", "cospectral_h", "cospectral_hprime")


def path(name: str):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(NAMES)}")
    return resources.files(__package__).joinpath("data", f"{name}.hg.json")


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> Hypergraph:
    return parse_hypergraph(text(name))
