import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from unit_spectra import fixtures
from unit_spectra.core import Hypergraph

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def fig1():
    return fixtures.load("fig1")


@pytest.fixture(scope="session")
def fig1_caption():
    return fixtures.load("fig1_caption")


@pytest.fixture(scope="session")
def cosp_h():
    return fixtures.load("cospectral_h")


@pytest.fixture(scope="session")
def cosp_hprime():
    return fixtures.load("cospectral_hprime")


@st.composite
def hypergraphs(draw, max_n=8, max_m=6, min_size=1, no_isolated=False):
    n = draw(st.integers(2, max_n))
    edge_sets = draw(
        st.lists(
            st.frozensets(st.integers(0, n - 1), min_size=min_size, max_size=n),
            min_size=1,
            max_size=max_m,
            unique=True,
        )
    )
    if no_isolated:
        covered = set().union(*edge_sets)
        missing = [v for v in range(n) if v not in covered]
        if missing:
            # missing vertices plus one covered vertex; cannot repeat an edge
            edge_sets.append(frozenset(missing) | {min(covered)})
    labels = [str(i + 1) for i in range(n)]
    return Hypergraph.from_edges(labels, [[labels[i] for i in sorted(e)] for e in edge_sets])
